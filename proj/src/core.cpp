#include "aslg/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "aslg/errors.hpp"

namespace aslg {

namespace {

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

ReturnSeries::ReturnSeries(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw InvalidArgument("return series must contain at least one observation");
    for (std::size_t t = 0; t < values_.size(); ++t) {
        if (!std::isfinite(values_[t]))
            throw InvalidArgument("non-finite return at index " + std::to_string(t));
    }
}

ReturnSeries::ReturnSeries(std::vector<double> values, std::vector<Date> dates)
    : ReturnSeries(std::move(values)) {
    if (dates.size() != values_.size())
        throw InvalidArgument("dates and values differ in length");
    for (std::size_t t = 1; t < dates.size(); ++t) {
        if (!(dates[t - 1] < dates[t]))
            throw InvalidArgument("dates must be strictly increasing (index " + std::to_string(t) + ")");
    }
    dates_ = std::move(dates);
}

ReturnSeries ReturnSeries::slice(std::size_t begin, std::size_t end) const {
    if (begin >= end || end > values_.size()) throw InvalidArgument("invalid slice bounds");
    std::vector<double> v(values_.begin() + static_cast<std::ptrdiff_t>(begin),
                          values_.begin() + static_cast<std::ptrdiff_t>(end));
    if (dates_.empty()) return ReturnSeries(std::move(v));
    std::vector<Date> d(dates_.begin() + static_cast<std::ptrdiff_t>(begin),
                        dates_.begin() + static_cast<std::ptrdiff_t>(end));
    return ReturnSeries(std::move(v), std::move(d));
}

ReturnSeries ReturnSeries::scaled(double c) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= c;
    if (dates_.empty()) return ReturnSeries(std::move(v));
    return ReturnSeries(std::move(v), dates_);
}

void AsLogGarchOrder::validate() const {
    if (p + q < 1) throw InvalidArgument("order requires p + q >= 1");
}

void AsLogGarchParams::validate() const {
    const std::size_t q = alpha_plus.size();
    if (omega_minus.size() != q || alpha_minus.size() != q)
        throw InvalidArgument("omega_minus, alpha_plus and alpha_minus must share length q");
    order().validate();
    if (!std::isfinite(omega) || !all_finite(omega_minus) || !all_finite(alpha_plus) ||
        !all_finite(alpha_minus) || !all_finite(beta))
        throw InvalidArgument("non-finite Log-GARCH coefficient");
}

Eigen::VectorXd AsLogGarchParams::to_vector() const {
    validate();
    const std::size_t q = alpha_plus.size();
    const std::size_t p = beta.size();
    Eigen::VectorXd v(static_cast<Eigen::Index>(3 * q + p + 1));
    Eigen::Index k = 0;
    v[k++] = omega;
    for (double x : omega_minus) v[k++] = x;
    for (double x : alpha_plus) v[k++] = x;
    for (double x : alpha_minus) v[k++] = x;
    for (double x : beta) v[k++] = x;
    return v;
}

AsLogGarchParams AsLogGarchParams::from_vector(const AsLogGarchOrder& order, const Eigen::VectorXd& v) {
    order.validate();
    if (static_cast<std::size_t>(v.size()) != order.dim())
        throw InvalidArgument("parameter vector length does not match order");
    AsLogGarchParams th;
    Eigen::Index k = 0;
    th.omega = v[k++];
    th.omega_minus.resize(order.q);
    th.alpha_plus.resize(order.q);
    th.alpha_minus.resize(order.q);
    th.beta.resize(order.p);
    for (auto& x : th.omega_minus) x = v[k++];
    for (auto& x : th.alpha_plus) x = v[k++];
    for (auto& x : th.alpha_minus) x = v[k++];
    for (auto& x : th.beta) x = v[k++];
    return th;
}

AsLogGarchParams AsLogGarchParams::pq11(double omega, double omega_minus, double alpha_plus,
                                        double alpha_minus, double beta) {
    return AsLogGarchParams{omega, {omega_minus}, {alpha_plus}, {alpha_minus}, {beta}};
}

void EgarchParams::validate() const {
    if (!std::isfinite(omega) || !std::isfinite(gamma) || !std::isfinite(delta) || !std::isfinite(beta))
        throw InvalidArgument("non-finite EGARCH coefficient");
    if (delta < std::abs(gamma)) throw InvalidArgument("EGARCH requires delta >= |gamma|");
    if (!(std::abs(beta) < 1.0)) throw InvalidArgument("EGARCH requires |beta| < 1");
}

Eigen::VectorXd EgarchParams::to_vector() const {
    Eigen::VectorXd v(4);
    v << omega, gamma, delta, beta;
    return v;
}

EgarchParams EgarchParams::from_vector(const Eigen::VectorXd& v) {
    if (v.size() != 4) throw InvalidArgument("EGARCH parameter vector must have length 4");
    return EgarchParams{v[0], v[1], v[2], v[3]};
}

void AugmentedLogGarchParams::validate() const {
    theta.validate();
    if (gamma_plus.empty() || gamma_plus.size() != gamma_minus.size())
        throw InvalidArgument("gamma_plus and gamma_minus must share a length ell >= 1");
    if (!all_finite(gamma_plus) || !all_finite(gamma_minus))
        throw InvalidArgument("non-finite gamma coefficient");
}

void AugmentedEgarchParams::validate() const {
    zeta.validate();
    const std::size_t q = alpha_plus.size();
    if (q == 0 || omega_minus.size() != q || alpha_minus.size() != q)
        throw InvalidArgument("augmented EGARCH requires alpha blocks of common length q >= 1");
    if (!all_finite(omega_minus) || !all_finite(alpha_plus) || !all_finite(alpha_minus))
        throw InvalidArgument("non-finite alpha coefficient");
}

std::string to_string(ModelKind kind) {
    return kind == ModelKind::AsLog ? "aslog" : "egarch";
}

std::string to_string(TestKind kind) {
    switch (kind) {
        case TestKind::LmAsLog: return "lm_aslog";
        case TestKind::LmEgarch: return "lm_egarch";
        case TestKind::PortmanteauAsLog: return "portmanteau_aslog";
        case TestKind::PortmanteauEgarch: return "portmanteau_egarch";
    }
    return "unknown";
}

AsLogGarchParams FitResult::aslog_params() const {
    if (model != ModelKind::AsLog) throw InvalidArgument("fit is not a Log-GARCH fit");
    return AsLogGarchParams::from_vector(order, params);
}

EgarchParams FitResult::egarch_params() const {
    if (model != ModelKind::Egarch) throw InvalidArgument("fit is not an EGARCH fit");
    return EgarchParams::from_vector(params);
}

AsLogGarchParams transport_params_under_scaling(const AsLogGarchParams& theta, double c) {
    if (!std::isfinite(c) || c <= 0.0) throw InvalidArgument("scaling constant must be finite and positive");
    theta.validate();
    const double lc2 = std::log(c * c);
    AsLogGarchParams out = theta;
    const double sum_beta = std::accumulate(theta.beta.begin(), theta.beta.end(), 0.0);
    const double sum_alpha_plus = std::accumulate(theta.alpha_plus.begin(), theta.alpha_plus.end(), 0.0);
    out.omega = theta.omega + lc2 * (1.0 - sum_beta - sum_alpha_plus);
    for (std::size_t i = 0; i < theta.omega_minus.size(); ++i)
        out.omega_minus[i] = theta.omega_minus[i] - lc2 * (theta.alpha_minus[i] - theta.alpha_plus[i]);
    return out;
}

std::vector<std::string> aslog_param_names(const AsLogGarchOrder& order) {
    std::vector<std::string> names{"omega"};
    for (std::size_t i = 1; i <= order.q; ++i) names.push_back("omega_minus" + std::to_string(i));
    for (std::size_t i = 1; i <= order.q; ++i) names.push_back("alpha_plus" + std::to_string(i));
    for (std::size_t i = 1; i <= order.q; ++i) names.push_back("alpha_minus" + std::to_string(i));
    for (std::size_t j = 1; j <= order.p; ++j) names.push_back("beta" + std::to_string(j));
    return names;
}

std::vector<std::string> egarch_param_names() { return {"omega", "gamma", "delta", "beta"}; }

std::optional<Date> parse_iso_date(std::string_view text) {
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    if (text.size() < 10) return std::nullopt;
    const std::string s(text.substr(0, 10));
    char tail = 0;
    if (std::sscanf(s.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3) return std::nullopt;
    const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!date.ok()) return std::nullopt;
    return date;
}

std::string format_iso_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

}  // namespace aslg
