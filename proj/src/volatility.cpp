#include "aslg/volatility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "aslg/errors.hpp"

namespace aslg {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_length(const PreparedSeries& data, std::size_t r0) {
    if (data.size() <= r0)
        throw InvalidArgument("series length " + std::to_string(data.size()) + " must exceed " +
                              std::to_string(r0));
}

void check_bound(double v, std::size_t t) {
    if (!std::isfinite(v) || std::abs(v) > kFilterBound)
        throw FilterDivergence("log-volatility recursion diverged", t);
}

// Lagged quantities with presample substitution.
struct Lags {
    const PreparedSeries& d;
    const std::vector<double>& ls;
    double presample_log_eps2;
    double presample_eps;

    bool negative(std::ptrdiff_t s) const { return s < 0 ? d.presample_negative : d.negative[s] != 0; }
    double log_eps2(std::ptrdiff_t s) const { return s < 0 ? presample_log_eps2 : d.log_eps2[s]; }
    double eps(std::ptrdiff_t s) const { return s < 0 ? presample_eps : d.eps[s]; }
    double log_sigma2(std::ptrdiff_t s) const { return s < 0 ? d.initial_log_sigma2 : ls[s]; }
};

Lags make_lags(const PreparedSeries& d, const std::vector<double>& ls) {
    return Lags{d, ls, std::log(d.presample_eps2), d.presample_eps()};
}

// Adds the omega_minus / alpha_plus / alpha_minus terms of lags 1..q.
double add_sign_terms(double v, const Lags& lag, std::ptrdiff_t t, const std::vector<double>& omega_minus,
                      const std::vector<double>& alpha_plus, const std::vector<double>& alpha_minus) {
    for (std::size_t i = 0; i < alpha_plus.size(); ++i) {
        const std::ptrdiff_t s = t - static_cast<std::ptrdiff_t>(i) - 1;
        const double le = lag.log_eps2(s);
        if (lag.negative(s))
            v += omega_minus[i] + alpha_minus[i] * le;
        else
            v += alpha_plus[i] * le;
    }
    return v;
}

FilterOutput run_log_filter(const AsLogGarchParams& th, const std::vector<double>* gamma_plus,
                            const std::vector<double>* gamma_minus, const PreparedSeries& data,
                            std::size_t r0) {
    check_length(data, r0);
    const std::size_t n = data.size();
    FilterOutput out;
    out.r0 = r0;
    out.floored = data.floored;
    out.log_sigma2.resize(n);
    out.residuals.resize(n);
    const Lags lag = make_lags(data, out.log_sigma2);
    for (std::size_t tt = 0; tt < n; ++tt) {
        const auto t = static_cast<std::ptrdiff_t>(tt);
        double v = add_sign_terms(th.omega, lag, t, th.omega_minus, th.alpha_plus, th.alpha_minus);
        for (std::size_t j = 0; j < th.beta.size(); ++j)
            v += th.beta[j] * lag.log_sigma2(t - static_cast<std::ptrdiff_t>(j) - 1);
        if (gamma_plus != nullptr) {
            for (std::size_t k = 0; k < gamma_plus->size(); ++k) {
                const std::ptrdiff_t s = t - static_cast<std::ptrdiff_t>(k) - 1;
                const double e = lag.eps(s);
                v += ((*gamma_plus)[k] * std::max(e, 0.0) + (*gamma_minus)[k] * std::max(-e, 0.0)) *
                     std::exp(-0.5 * lag.log_sigma2(s));
            }
        }
        check_bound(v, tt);
        out.log_sigma2[tt] = v;
        out.residuals[tt] = data.eps[tt] * std::exp(-0.5 * v);
    }
    return out;
}

FilterOutput run_egarch_filter(const EgarchParams& z, const AugmentedEgarchParams* aug, const PreparedSeries& data,
                               std::size_t r0) {
    check_length(data, r0);
    const std::size_t n = data.size();
    FilterOutput out;
    out.r0 = r0;
    out.floored = data.floored;
    out.log_sigma2.resize(n);
    out.residuals.resize(n);
    const Lags lag = make_lags(data, out.log_sigma2);
    for (std::size_t tt = 0; tt < n; ++tt) {
        const auto t = static_cast<std::ptrdiff_t>(tt);
        const double h = lag.log_sigma2(t - 1);
        const double e = lag.eps(t - 1) * std::exp(-0.5 * h);
        double v = z.omega + z.gamma * e + z.delta * std::abs(e) + z.beta * h;
        if (aug != nullptr) v = add_sign_terms(v, lag, t, aug->omega_minus, aug->alpha_plus, aug->alpha_minus);
        check_bound(v, tt);
        out.log_sigma2[tt] = v;
        out.residuals[tt] = data.eps[tt] * std::exp(-0.5 * v);
    }
    return out;
}

}  // namespace

void InitPolicy::validate() const {
    if (presample_eps2 && !(*presample_eps2 > 0.0 && std::isfinite(*presample_eps2)))
        throw InvalidArgument("presample_eps2 must be positive and finite");
    if (initial_log_sigma2 && !std::isfinite(*initial_log_sigma2))
        throw InvalidArgument("initial_log_sigma2 must be finite");
    if (!(zero_return_floor > 0.0 && std::isfinite(zero_return_floor)))
        throw InvalidArgument("zero_return_floor must be positive and finite");
}

double PreparedSeries::presample_eps() const noexcept {
    const double a = std::sqrt(presample_eps2);
    return presample_negative ? -a : a;
}

PreparedSeries prepare_series(std::span<const double> eps, const InitPolicy& init) {
    init.validate();
    if (eps.empty()) throw InvalidArgument("empty return series");
    const double n = static_cast<double>(eps.size());
    double sum = 0.0;
    double sum2 = 0.0;
    for (double x : eps) {
        if (!std::isfinite(x)) throw InvalidArgument("non-finite return");
        sum += x;
        sum2 += x * x;
    }
    const double mean2 = sum2 / n;
    double sd = 0.0;
    if (eps.size() > 1) {
        const double mean = sum / n;
        double ss = 0.0;
        for (double x : eps) ss += (x - mean) * (x - mean);
        sd = std::sqrt(ss / (n - 1.0));
    }
    PreparedSeries d;
    d.floor_abs = init.zero_return_floor * (sd > 0.0 ? sd : std::sqrt(mean2));
    if (!(d.floor_abs > 0.0)) throw InvalidArgument("every return is zero");
    d.eps.assign(eps.begin(), eps.end());
    d.negative.resize(eps.size());
    d.log_eps2.resize(eps.size());
    const double floor_log = 2.0 * std::log(d.floor_abs);
    for (std::size_t t = 0; t < eps.size(); ++t) {
        const double a = std::abs(eps[t]);
        if (a < d.floor_abs) {
            ++d.floored;
            d.negative[t] = 0;
            d.log_eps2[t] = floor_log;
        } else {
            d.negative[t] = eps[t] < 0.0 ? 1 : 0;
            d.log_eps2[t] = std::log(eps[t] * eps[t]);
        }
    }
    d.presample_eps2 = init.presample_eps2.value_or(mean2);
    d.presample_negative = init.presample_sign_negative;
    d.initial_log_sigma2 = init.initial_log_sigma2.value_or(std::log(mean2));
    return d;
}

FilterOutput filter_aslog(const AsLogGarchParams& theta, const PreparedSeries& data) {
    theta.validate();
    return run_log_filter(theta, nullptr, nullptr, data, std::max(theta.beta.size(), theta.alpha_plus.size()));
}

FilterOutput filter_aslog(const AsLogGarchParams& theta, const ReturnSeries& eps, const InitPolicy& init) {
    return filter_aslog(theta, prepare_series(eps.values(), init));
}

Eigen::MatrixXd grad_aslog(const AsLogGarchParams& theta, const PreparedSeries& data, const FilterOutput& filtered) {
    const std::size_t q = theta.alpha_plus.size();
    const std::size_t p = theta.beta.size();
    const std::size_t n = data.size();
    const auto d = static_cast<Eigen::Index>(3 * q + p + 1);
    RowMatrix g = RowMatrix::Zero(static_cast<Eigen::Index>(n), d);
    const Lags lag = make_lags(data, filtered.log_sigma2);
    for (std::size_t tt = 0; tt < n; ++tt) {
        const auto t = static_cast<std::ptrdiff_t>(tt);
        const auto row = static_cast<Eigen::Index>(tt);
        g(row, 0) = 1.0;
        for (std::size_t i = 0; i < q; ++i) {
            const std::ptrdiff_t s = t - static_cast<std::ptrdiff_t>(i) - 1;
            const double le = lag.log_eps2(s);
            const auto col = static_cast<Eigen::Index>(i);
            if (lag.negative(s)) {
                g(row, 1 + col) = 1.0;
                g(row, 1 + 2 * q + col) = le;
            } else {
                g(row, 1 + q + col) = le;
            }
        }
        for (std::size_t j = 0; j < p; ++j)
            g(row, static_cast<Eigen::Index>(1 + 3 * q + j)) = lag.log_sigma2(t - static_cast<std::ptrdiff_t>(j) - 1);
        for (std::size_t j = 0; j < p; ++j) {
            const std::ptrdiff_t s = t - static_cast<std::ptrdiff_t>(j) - 1;
            if (s >= 0) g.row(row) += theta.beta[j] * g.row(static_cast<Eigen::Index>(s));
        }
    }
    return g;
}

Eigen::MatrixXd grad_aslog(const AsLogGarchParams& theta, const ReturnSeries& eps, const InitPolicy& init) {
    const PreparedSeries data = prepare_series(eps.values(), init);
    return grad_aslog(theta, data, filter_aslog(theta, data));
}

FilterOutput filter_egarch(const EgarchParams& zeta, const PreparedSeries& data) {
    zeta.validate();
    if (data.size() < 2) throw InvalidArgument("EGARCH filter requires at least two observations");
    return run_egarch_filter(zeta, nullptr, data, 1);
}

FilterOutput filter_egarch(const EgarchParams& zeta, const ReturnSeries& eps, const InitPolicy& init) {
    return filter_egarch(zeta, prepare_series(eps.values(), init));
}

Eigen::MatrixXd grad_egarch(const EgarchParams& zeta, const PreparedSeries& data, const FilterOutput& filtered) {
    const std::size_t n = data.size();
    RowMatrix g(static_cast<Eigen::Index>(n), 4);
    const Lags lag = make_lags(data, filtered.log_sigma2);
    Eigen::RowVector4d prev = Eigen::RowVector4d::Zero();
    for (std::size_t tt = 0; tt < n; ++tt) {
        const auto t = static_cast<std::ptrdiff_t>(tt);
        const double h = lag.log_sigma2(t - 1);
        const double e = lag.eps(t - 1) * std::exp(-0.5 * h);
        const double u = zeta.beta - 0.5 * (zeta.gamma * e + zeta.delta * std::abs(e));
        Eigen::RowVector4d cur(1.0, e, std::abs(e), h);
        cur += u * prev;
        g.row(static_cast<Eigen::Index>(tt)) = cur;
        prev = cur;
    }
    return g;
}

Eigen::MatrixXd grad_egarch(const EgarchParams& zeta, const ReturnSeries& eps, const InitPolicy& init) {
    const PreparedSeries data = prepare_series(eps.values(), init);
    return grad_egarch(zeta, data, filter_egarch(zeta, data));
}

FilterOutput filter_augmented_log(const AugmentedLogGarchParams& vartheta, const PreparedSeries& data) {
    vartheta.validate();
    const auto& th = vartheta.theta;
    const std::size_t r0 = std::max({th.beta.size(), th.alpha_plus.size(), vartheta.ell()});
    return run_log_filter(th, &vartheta.gamma_plus, &vartheta.gamma_minus, data, r0);
}

FilterOutput filter_augmented_log(const AugmentedLogGarchParams& vartheta, const ReturnSeries& eps,
                                  const InitPolicy& init) {
    return filter_augmented_log(vartheta, prepare_series(eps.values(), init));
}

FilterOutput filter_augmented_egarch(const AugmentedEgarchParams& vartheta, const PreparedSeries& data) {
    vartheta.validate();
    return run_egarch_filter(vartheta.zeta, &vartheta, data, std::max<std::size_t>(1, vartheta.q()));
}

FilterOutput filter_augmented_egarch(const AugmentedEgarchParams& vartheta, const ReturnSeries& eps,
                                     const InitPolicy& init) {
    return filter_augmented_egarch(vartheta, prepare_series(eps.values(), init));
}

EgarchAlphaGradient egarch_grad_alpha(const EgarchParams& zeta, std::size_t q, const PreparedSeries& data,
                                      const FilterOutput& filtered) {
    if (q == 0) throw InvalidArgument("egarch_grad_alpha requires q >= 1");
    const std::size_t n = data.size();
    const auto qq = static_cast<Eigen::Index>(q);
    RowMatrix d = RowMatrix::Zero(static_cast<Eigen::Index>(n), 3 * qq);
    Eigen::VectorXd u(static_cast<Eigen::Index>(n));
    const Lags lag = make_lags(data, filtered.log_sigma2);
    double u_prev = 0.0;
    for (std::size_t tt = 0; tt < n; ++tt) {
        const auto t = static_cast<std::ptrdiff_t>(tt);
        const auto row = static_cast<Eigen::Index>(tt);
        for (Eigen::Index i = 0; i < qq; ++i) {
            const std::ptrdiff_t s = t - i - 1;
            const double le = lag.log_eps2(s);
            if (lag.negative(s)) {
                d(row, i) = 1.0;
                d(row, 2 * qq + i) = le;
            } else {
                d(row, qq + i) = le;
            }
        }
        if (tt > 0) d.row(row) += u_prev * d.row(row - 1);
        const double e = data.eps[tt] * std::exp(-0.5 * filtered.log_sigma2[tt]);
        u_prev = zeta.beta - 0.5 * (zeta.gamma * e + zeta.delta * std::abs(e));
        u[row] = u_prev;
    }
    return {d, u};
}

EgarchAlphaGradient egarch_grad_alpha(const AugmentedEgarchParams& vartheta_c, const ReturnSeries& eps,
                                      const InitPolicy& init) {
    vartheta_c.validate();
    auto nonzero = [](const std::vector<double>& v) {
        return std::any_of(v.begin(), v.end(), [](double x) { return x != 0.0; });
    };
    if (nonzero(vartheta_c.omega_minus) || nonzero(vartheta_c.alpha_plus) || nonzero(vartheta_c.alpha_minus))
        throw InvalidArgument("egarch_grad_alpha is defined at alpha = 0");
    const PreparedSeries data = prepare_series(eps.values(), init);
    const FilterOutput f = filter_egarch(vartheta_c.zeta, data);
    return egarch_grad_alpha(vartheta_c.zeta, vartheta_c.q(), data, f);
}

double beta_companion_radius(std::span<const double> beta) {
    const auto p = static_cast<Eigen::Index>(beta.size());
    if (p == 0) return 0.0;
    if (p == 1) return std::abs(beta[0]);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index j = 0; j < p; ++j) c(0, j) = beta[static_cast<std::size_t>(j)];
    for (Eigen::Index j = 1; j < p; ++j) c(j, j - 1) = 1.0;
    return Eigen::EigenSolver<Eigen::MatrixXd>(c, false).eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::MatrixXd nu_hat(const FilterOutput& filtered, std::span<const double> beta, std::size_t ell) {
    if (ell == 0) throw InvalidArgument("nu_hat requires ell >= 1");
    if (!(beta_companion_radius(beta) < 1.0))
        throw InvalidModel("beta lag polynomial has a root on or inside the unit circle");
    const auto n = static_cast<Eigen::Index>(filtered.residuals.size());
    const auto l = static_cast<Eigen::Index>(ell);
    RowMatrix nu = RowMatrix::Zero(n, 2 * l);
    for (Eigen::Index t = 0; t < n; ++t) {
        for (Eigen::Index k = 0; k < l; ++k) {
            const Eigen::Index s = t - k - 1;
            if (s < 0) break;
            // columns (2k, 2k+1) hold lag k+1
            const double e = filtered.residuals[static_cast<std::size_t>(s)];
            nu(t, 2 * k) = std::max(e, 0.0);
            nu(t, 2 * k + 1) = std::max(-e, 0.0);
        }
        for (std::size_t j = 0; j < beta.size(); ++j) {
            const Eigen::Index s = t - static_cast<Eigen::Index>(j) - 1;
            if (s >= 0) nu.row(t) += beta[j] * nu.row(s);
        }
    }
    return nu;
}

std::vector<double> news_impact_curve(const AsLogGarchParams& theta, std::span<const double> grid) {
    theta.validate();
    if (theta.alpha_plus.size() != 1) throw InvalidArgument("news impact curve requires q = 1");
    const double alpha = theta.alpha_plus[0];
    const double tau = theta.alpha_minus[0] - theta.alpha_plus[0];
    std::vector<double> out;
    out.reserve(grid.size());
    for (double e : grid) {
        if (e == 0.0 || !std::isfinite(e)) throw InvalidArgument("news impact grid values must be finite and nonzero");
        const double le = std::log(e * e);
        const bool neg = e < 0.0;
        const double log_s2 = theta.omega + (neg ? theta.omega_minus[0] : 0.0) + alpha * le + (neg ? tau * le : 0.0);
        out.push_back(std::exp(0.5 * log_s2));
    }
    return out;
}

}  // namespace aslg
