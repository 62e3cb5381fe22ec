#include "aslg/stationarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aslg/errors.hpp"

namespace aslg {

std::string to_string(StationarityVerdict v) {
    switch (v) {
        case StationarityVerdict::Stationary: return "stationary";
        case StationarityVerdict::Nonstationary: return "nonstationary";
        case StationarityVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

StationarityVerdict LyapunovEstimate::verdict() const noexcept {
    if (gamma_hat + 2.0 * std_err < 0.0) return StationarityVerdict::Stationary;
    if (gamma_hat - 2.0 * std_err > 0.0) return StationarityVerdict::Nonstationary;
    return StationarityVerdict::Inconclusive;
}

namespace {

// Rows of C_t shared by both signs; the sign selects which of the first two block rows is active.
struct Companion {
    Eigen::MatrixXd positive;
    Eigen::MatrixXd negative;
};

Companion build_companion(const AsLogGarchParams& th) {
    const auto q = static_cast<Eigen::Index>(std::max<std::size_t>(th.alpha_plus.size(), 1));
    const auto p = static_cast<Eigen::Index>(std::max<std::size_t>(th.beta.size(), 1));
    const Eigen::Index dim = 2 * q + p;
    Eigen::RowVectorXd coef = Eigen::RowVectorXd::Zero(dim);
    for (std::size_t i = 0; i < th.alpha_plus.size(); ++i) {
        coef[static_cast<Eigen::Index>(i)] = th.alpha_plus[i];
        coef[q + static_cast<Eigen::Index>(i)] = th.alpha_minus[i];
    }
    for (std::size_t j = 0; j < th.beta.size(); ++j) coef[2 * q + static_cast<Eigen::Index>(j)] = th.beta[j];

    Eigen::MatrixXd base = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index i = 1; i < q; ++i) {
        base(i, i - 1) = 1.0;
        base(q + i, q + i - 1) = 1.0;
    }
    for (Eigen::Index j = 1; j < p; ++j) base(2 * q + j, 2 * q + j - 1) = 1.0;
    base.row(2 * q) = coef;

    Companion c{base, base};
    c.positive.row(0) = coef;
    c.negative.row(q) = coef;
    return c;
}

}  // namespace

LyapunovEstimate lyapunov_exponent_mc(const AsLogGarchParams& theta, double prob_positive, std::size_t horizon,
                                      std::size_t reps, const Rng& rng) {
    theta.validate();
    if (!(prob_positive > 0.0 && prob_positive < 1.0)) throw InvalidArgument("prob_positive must lie in (0,1)");
    if (horizon < 100) throw InvalidArgument("Lyapunov horizon must be at least 100");
    if (reps < 10) throw InvalidArgument("Lyapunov estimate needs at least 10 replications");

    const Companion c = build_companion(theta);
    const std::size_t start = horizon / 10;
    constexpr std::size_t rescale_every = 25;
    std::vector<double> est(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        Rng stream = rng.child(r);
        Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(c.positive.rows(), c.positive.cols());
        double log_scale = 0.0;
        double log_at_start = 0.0;
        bool collapsed = false;
        for (std::size_t t = 1; t <= horizon; ++t) {
            const Eigen::MatrixXd& ct = stream.uniform() < prob_positive ? c.positive : c.negative;
            prod = ct * prod;
            if (t % rescale_every == 0 || t == start || t == horizon) {
                const double nrm = prod.norm();
                if (nrm == 0.0) {
                    collapsed = true;
                    break;
                }
                if (!std::isfinite(nrm)) throw Error("Lyapunov product overflowed despite rescaling");
                prod /= nrm;
                log_scale += std::log(nrm);
                if (t == start) log_at_start = log_scale;
            }
        }
        est[r] = collapsed ? -std::numeric_limits<double>::infinity()
                           : (log_scale - log_at_start) / static_cast<double>(horizon - start);
    }

    LyapunovEstimate out;
    out.horizon = horizon;
    out.reps = reps;
    if (std::any_of(est.begin(), est.end(), [](double x) { return std::isinf(x); })) {
        out.gamma_hat = -std::numeric_limits<double>::infinity();
        return out;
    }
    double mean = 0.0;
    for (double x : est) mean += x;
    mean /= static_cast<double>(reps);
    double ss = 0.0;
    for (double x : est) ss += (x - mean) * (x - mean);
    out.gamma_hat = mean;
    out.std_err = std::sqrt(ss / static_cast<double>(reps - 1) / static_cast<double>(reps));
    return out;
}

double stationarity_pq11_closed_form(const AsLogGarchParams& theta, double prob_positive) {
    theta.validate();
    if (theta.alpha_plus.size() != 1 || theta.beta.size() != 1)
        throw InvalidArgument("closed form requires p = q = 1");
    if (!(prob_positive >= 0.0 && prob_positive <= 1.0)) throw InvalidArgument("prob_positive must lie in [0,1]");
    const double up = std::abs(theta.alpha_plus[0] + theta.beta[0]);
    const double dn = std::abs(theta.alpha_minus[0] + theta.beta[0]);
    auto term = [](double w, double x) { return w == 0.0 ? 0.0 : w * std::log(x); };
    return term(prob_positive, up) + term(1.0 - prob_positive, dn);
}

MomentCheck moment_matrix_check(const AsLogGarchParams& theta) {
    theta.validate();
    const std::size_t q = theta.alpha_plus.size();
    const std::size_t p = theta.beta.size();
    const std::size_t r = std::max(p, q);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
    for (std::size_t i = 0; i < r; ++i) {
        const double ap = i < q ? theta.alpha_plus[i] : 0.0;
        const double am = i < q ? theta.alpha_minus[i] : 0.0;
        const double b = i < p ? theta.beta[i] : 0.0;
        a(0, static_cast<Eigen::Index>(i)) = std::max(std::abs(ap + b), std::abs(am + b));
        if (i > 0) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i) - 1) = 1.0;
    }
    const double rho = spectral_radius(a);
    return {rho, rho < 1.0};
}

InvertibilityCheck egarch_invertibility_check(const EgarchParams& zeta, const ReturnSeries& eps, double floor) {
    if (!(std::abs(zeta.beta) < 1.0)) throw InvalidArgument("invertibility check requires |beta| < 1");
    if (!(floor > 0.0)) throw InvalidArgument("floor must be positive");
    const double scale = std::exp(-zeta.omega / (2.0 * (1.0 - zeta.beta)));
    InvertibilityCheck out;
    double sum = 0.0;
    for (double e : eps.values()) {
        const double inner = std::max(zeta.beta, 0.5 * (zeta.gamma * e + zeta.delta * std::abs(e)) * scale - zeta.beta);
        if (inner <= floor) {
            ++out.floored;
            sum += std::log(floor);
        } else {
            sum += std::log(inner);
        }
    }
    if (out.floored == eps.size()) throw Error("invertibility check is indeterminate: every observation hit the floor");
    out.mean = sum / static_cast<double>(eps.size());
    out.pass = out.mean < 0.0;
    return out;
}

}  // namespace aslg
