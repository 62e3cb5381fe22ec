#include "aslg/forecast.hpp"

#include <cmath>

#include "aslg/errors.hpp"
#include "aslg/numerics.hpp"

namespace aslg {

std::vector<double> oos_forecast(const FitResult& fit, const ReturnSeries& full_series, std::size_t split_index,
                                 const InitPolicy& init) {
    if (split_index < fit.n) throw InvalidArgument("split_index precedes the end of the estimation sample");
    if (split_index >= full_series.size()) throw InvalidArgument("holdout is empty");
    const FilterOutput f = fit.model == ModelKind::AsLog ? filter_aslog(fit.aslog_params(), full_series, init)
                                                         : filter_egarch(fit.egarch_params(), full_series, init);
    std::vector<double> out;
    out.reserve(full_series.size() - split_index);
    for (std::size_t t = split_index; t < full_series.size(); ++t) out.push_back(std::exp(f.log_sigma2[t]));
    return out;
}

std::string to_string(LossKind kind) {
    switch (kind) {
        case LossKind::MSE: return "MSE";
        case LossKind::MAE: return "MAE";
        case LossKind::LogMSE: return "LogMSE";
        case LossKind::LogMAE: return "LogMAE";
    }
    return "MSE";
}

LossKind loss_kind_from_string(const std::string& s) {
    for (LossKind k : kAllLosses)
        if (to_string(k) == s) return k;
    throw InvalidArgument("unknown loss '" + s + "' (expected MSE, MAE, LogMSE or LogMAE)");
}

std::vector<double> loss_series(std::span<const double> eps2, std::span<const double> sigma2_hat, LossKind kind,
                                double eps2_floor) {
    if (eps2.size() != sigma2_hat.size()) throw InvalidArgument("loss_series: lengths differ");
    if (eps2_floor < 0.0) throw InvalidArgument("loss_series: floor must be nonnegative");
    std::vector<double> out(eps2.size());
    for (std::size_t t = 0; t < eps2.size(); ++t) {
        const double s = sigma2_hat[t];
        if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("loss_series: forecasts must be positive");
        const double e = eps2[t];
        if (e < 0.0 || !std::isfinite(e)) throw InvalidArgument("loss_series: squared returns must be nonnegative");
        switch (kind) {
            case LossKind::MSE: out[t] = (e - s) * (e - s); break;
            case LossKind::MAE: out[t] = std::abs(e - s); break;
            case LossKind::LogMSE:
            case LossKind::LogMAE: {
                const double ef = std::max(e, eps2_floor);
                if (!(ef > 0.0)) throw InvalidArgument("loss_series: zero squared return in a log loss; set a floor");
                const double l = std::log(ef / s);
                out[t] = kind == LossKind::LogMSE ? l * l : std::abs(l);
                break;
            }
        }
    }
    return out;
}

DieboldMarianoResult diebold_mariano(std::span<const double> loss_a, std::span<const double> loss_b,
                                     std::optional<std::size_t> hac_lag) {
    if (loss_a.size() != loss_b.size()) throw InvalidArgument("diebold_mariano: lengths differ");
    const std::size_t n = loss_a.size();
    if (n < 30) throw InvalidArgument("diebold_mariano: at least 30 losses required");
    std::vector<double> d(n);
    double mean = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        d[t] = loss_b[t] - loss_a[t];
        mean += d[t];
    }
    const double dn = static_cast<double>(n);
    mean /= dn;
    auto autocov = [&](std::size_t k) {
        double acc = 0.0;
        for (std::size_t t = k; t < n; ++t) acc += (d[t] - mean) * (d[t - k] - mean);
        return acc / dn;
    };
    double var = autocov(0);
    if (hac_lag) {
        if (*hac_lag >= n) throw InvalidArgument("diebold_mariano: HAC lag must be below n");
        for (std::size_t k = 1; k <= *hac_lag; ++k)
            var += 2.0 * (1.0 - static_cast<double>(k) / static_cast<double>(*hac_lag + 1)) * autocov(k);
    }
    if (!(var > 0.0)) throw InvalidArgument("diebold_mariano: degenerate loss differential (zero variance)");
    DieboldMarianoResult r;
    r.n = n;
    r.mean_differential = mean;
    r.statistic = mean / std::sqrt(var / dn);
    r.p_value = normal_sf(r.statistic);
    return r;
}

}  // namespace aslg
