#include "aslg/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <tuple>

#include "aslg/errors.hpp"
#include "aslg/numerics.hpp"
#include "aslg/stationarity.hpp"

namespace aslg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// E log Z^2 for standard normal Z.
constexpr double kMeanLogChi2 = -1.2703628454614782;
// E |Z| for standard normal Z.
constexpr double kMeanAbsNormal = 0.7978845608028654;

double criterion_from_filter(const FilterOutput& f) {
    const std::size_t n = f.log_sigma2.size();
    double s = 0.0;
    for (std::size_t t = f.r0; t < n; ++t) s += f.residuals[t] * f.residuals[t] + f.log_sigma2[t];
    return s / static_cast<double>(n - f.r0);
}

struct Moments {
    Eigen::VectorXd gradient;  // of the criterion
    Eigen::MatrixXd j;
    double kappa_minus_one = 0.0;
};

Moments score_moments(const FilterOutput& f, const Eigen::MatrixXd& g) {
    const std::size_t n = f.log_sigma2.size();
    const auto m = static_cast<double>(n - f.r0);
    const auto rows = static_cast<Eigen::Index>(n - f.r0);
    const auto r0 = static_cast<Eigen::Index>(f.r0);
    const Eigen::MatrixXd gs = g.bottomRows(rows);
    Eigen::VectorXd w(rows);
    for (Eigen::Index t = 0; t < rows; ++t) {
        const double e = f.residuals[static_cast<std::size_t>(r0 + t)];
        w[t] = 1.0 - e * e;
    }
    Moments out;
    out.gradient = gs.transpose() * w / m;
    out.j = gs.transpose() * gs / m;
    out.j = 0.5 * (out.j + out.j.transpose());
    out.kappa_minus_one = w.squaredNorm() / m;
    return out;
}

Eigen::MatrixXd inverse_with_ridge(const Eigen::MatrixXd& j, double ridge, std::vector<std::string>& warnings) {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(j.rows(), j.cols());
    try {
        return solve_spd(j, id).x;
    } catch (const SingularMatrix& e) {
        if (ridge <= 0.0) throw SingularMatrix("information matrix is singular", e.pivot());
        const double lambda = ridge * j.trace() / static_cast<double>(j.rows());
        warnings.push_back("information matrix singular (pivot " + std::to_string(e.pivot()) +
                           "); ridge " + std::to_string(lambda) + " added to its diagonal");
        return solve_spd(j + lambda * id, id).x;
    }
}

Eigen::VectorXd sqrt_diag(const Eigen::MatrixXd& cov) {
    Eigen::VectorXd se(cov.rows());
    for (Eigen::Index i = 0; i < cov.rows(); ++i) se[i] = std::sqrt(std::max(cov(i, i), 0.0));
    return se;
}

double log_mean_square(const PreparedSeries& d) {
    double s = 0.0;
    for (double x : d.eps) s += x * x;
    return std::log(s / static_cast<double>(d.size()));
}

Eigen::VectorXd initial_step(const Box& box, const Eigen::VectorXd& x, const Eigen::VectorXd& step) {
    Eigen::VectorXd out = step;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x[i] + out[i] > box.upper[i]) out[i] = -out[i];
    return out;
}

Eigen::VectorXd clip_to_box(const Box& box, Eigen::VectorXd x) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double margin = 1e-6 * (box.upper[i] - box.lower[i]);
        x[i] = std::clamp(x[i], box.lower[i] + margin, box.upper[i] - margin);
    }
    return x;
}

struct RestartOutcome {
    Eigen::VectorXd x;
    double f = kInf;
    std::size_t iterations = 0;
    bool converged = false;
};

// Runs restarts in parallel and keeps the best (ties go to the lowest index).
template <typename Run>
RestartOutcome best_of_restarts(const OptimConfig& config, Run run) {
    std::vector<RestartOutcome> results(config.restarts);
    parallel_for(config.restarts, config.threads, [&](std::size_t r) {
        try {
            results[r] = run(r);
        } catch (const Error&) {
            results[r] = RestartOutcome{};
        }
    });
    std::size_t best = 0;
    for (std::size_t r = 1; r < results.size(); ++r)
        if (results[r].f < results[best].f) best = r;
    return results[best];
}

// ---------- Log-GARCH ----------

Eigen::VectorXd aslog_free_from_theta(const AsLogGarchParams& th, bool restrict_alpha) {
    const Eigen::VectorXd v = th.to_vector();
    if (!restrict_alpha) return v;
    const std::size_t q = th.alpha_plus.size();
    const std::size_t p = th.beta.size();
    Eigen::VectorXd phi(static_cast<Eigen::Index>(2 * q + p + 1));
    Eigen::Index k = 0;
    phi[k++] = th.omega;
    for (double x : th.omega_minus) phi[k++] = x;
    for (double x : th.alpha_plus) phi[k++] = x;
    for (double x : th.beta) phi[k++] = x;
    return phi;
}

AsLogGarchParams aslog_start(const AsLogGarchOrder& order, double hbar, bool random, Rng& rng, bool restrict_alpha) {
    AsLogGarchParams th;
    th.omega_minus.assign(order.q, 0.0);
    th.alpha_plus.assign(order.q, 0.0);
    th.alpha_minus.assign(order.q, 0.0);
    th.beta.assign(order.p, 0.0);
    auto unif = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
    if (!random) {
        if (order.q > 0) th.alpha_plus[0] = th.alpha_minus[0] = order.p > 0 ? 0.03 : 0.1;
        if (order.p > 0) th.beta[0] = 0.9;
    } else {
        for (std::size_t i = 0; i < order.q; ++i) {
            th.alpha_plus[i] = i == 0 ? unif(-0.05, 0.15) : unif(-0.05, 0.05);
            th.alpha_minus[i] = restrict_alpha ? th.alpha_plus[i] : (i == 0 ? unif(-0.05, 0.15) : unif(-0.05, 0.05));
            th.omega_minus[i] = unif(-0.2, 0.2);
        }
        for (std::size_t j = 0; j < order.p; ++j) th.beta[j] = j == 0 ? unif(0.5, 0.98) : unif(-0.05, 0.05);
    }
    double sum_a = 0.0;
    for (std::size_t i = 0; i < order.q; ++i) sum_a += 0.5 * (th.alpha_plus[i] + th.alpha_minus[i]);
    const double sum_b = std::accumulate(th.beta.begin(), th.beta.end(), 0.0);
    // Stationary mean of log sigma^2 matched to log of the mean square.
    th.omega = hbar * (1.0 - sum_a - sum_b) - kMeanLogChi2 * sum_a;
    if (random) th.omega += unif(-0.1, 0.1);
    return th;
}

Eigen::VectorXd aslog_step(const AsLogGarchOrder& order, bool restrict_alpha) {
    const std::size_t q = order.q;
    const std::size_t p = order.p;
    const std::size_t k = restrict_alpha ? 2 * q + p + 1 : 3 * q + p + 1;
    Eigen::VectorXd s(static_cast<Eigen::Index>(k));
    Eigen::Index i = 0;
    s[i++] = 0.1;
    for (std::size_t j = 0; j < q; ++j) s[i++] = 0.05;
    for (std::size_t j = 0; j < (restrict_alpha ? q : 2 * q); ++j) s[i++] = 0.02;
    for (std::size_t j = 0; j < p; ++j) s[i++] = 0.02;
    return s;
}

struct LogProblem {
    const PreparedSeries& data;
    AsLogGarchOrder order;
    Eigen::MatrixXd map;
    Box box;

    AsLogGarchParams theta(const Eigen::VectorXd& phi) const {
        return AsLogGarchParams::from_vector(order, map * phi);
    }
    double value(const Eigen::VectorXd& phi) const {
        if (!box.contains(phi)) return kInf;
        return qmle_criterion(theta(phi), data);
    }
};

// Gauss-Newton scoring in free coordinates; returns whether the Newton decrement fell below tolerance.
template <typename Problem, typename Moments_>
bool scoring(const Problem& prob, Eigen::VectorXd& x, double& fx, std::size_t& iterations, Moments_ moments,
             const std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&, double)>& step_to,
             double tol) {
    for (int it = 0; it < 100; ++it) {
        Eigen::VectorXd g;
        Eigen::MatrixXd j;
        try {
            std::tie(g, j) = moments(x);
        } catch (const Error&) {
            return false;
        }
        Eigen::VectorXd delta;
        try {
            delta = -solve_spd(j, g).x;
        } catch (const SingularMatrix&) {
            return false;
        }
        const double decrement = -g.dot(delta);
        ++iterations;
        if (decrement < 1e-12) return true;
        bool accepted = false;
        double lambda = 1.0;
        for (int h = 0; h < 40; ++h, lambda *= 0.5) {
            const Eigen::VectorXd cand = step_to(x, delta, lambda);
            const double fc = prob.value(cand);
            if (fc < fx) {
                x = cand;
                const double gain = fx - fc;
                fx = fc;
                accepted = true;
                if (gain < tol * (1.0 + std::abs(fx)) && lambda == 1.0) return true;
                break;
            }
        }
        if (!accepted) return decrement < 1e-8;
    }
    return false;
}

FitResult finalize_aslog(const AsLogGarchParams& theta, const PreparedSeries& data, bool restrict_alpha,
                         double ridge) {
    const AsLogGarchOrder order = theta.order();
    const FilterOutput f = filter_aslog(theta, data);
    const Eigen::MatrixXd g = grad_aslog(theta, data, f);
    const Moments mom = score_moments(f, g);
    FitResult r;
    r.model = ModelKind::AsLog;
    r.order = order;
    r.restrict_alpha = restrict_alpha;
    r.params = theta.to_vector();
    r.free_map = aslog_free_map(order, restrict_alpha);
    r.free_names = aslog_free_names(order, restrict_alpha);
    r.free_params = aslog_free_from_theta(theta, restrict_alpha);
    r.n = data.size();
    r.r0 = f.r0;
    r.criterion_value = criterion_from_filter(f);
    r.loglik_per_obs = -0.5 * (std::log(2.0 * std::numbers::pi) + r.criterion_value);
    r.kappa4_hat = 1.0 + mom.kappa_minus_one;
    r.j_hat = r.free_map.transpose() * mom.j * r.free_map;
    const Eigen::MatrixXd jinv = inverse_with_ridge(r.j_hat, ridge, r.warnings);
    r.cov = mom.kappa_minus_one * jinv / static_cast<double>(r.n - r.r0);
    r.cov = 0.5 * (r.cov + r.cov.transpose());
    r.std_errors = sqrt_diag(r.cov);
    if (data.floored > 0)
        r.warnings.push_back(std::to_string(data.floored) + " near-zero returns floored before taking logs");
    return r;
}

// ---------- EGARCH ----------

EgarchParams egarch_from_phi(const Eigen::VectorXd& phi) {
    return EgarchParams{phi[0], phi[1], std::abs(phi[1]) + phi[2] * phi[2], phi[3]};
}

struct EgarchProblem {
    const PreparedSeries& data;
    Box box;  // over (omega, gamma, s, beta)

    // Scoring works on zeta directly; only the omega and beta bounds apply there.
    double value(const Eigen::VectorXd& zeta) const {
        if (!(zeta[2] >= std::abs(zeta[1]))) return kInf;
        if (zeta[0] < box.lower[0] || zeta[0] > box.upper[0] || zeta[3] < box.lower[3] || zeta[3] > box.upper[3])
            return kInf;
        return qmle_criterion(EgarchParams::from_vector(zeta), data);
    }
    double value_phi(const Eigen::VectorXd& phi) const {
        if (!box.contains(phi)) return kInf;
        return qmle_criterion(egarch_from_phi(phi), data);
    }
};

FitResult finalize_egarch(const EgarchParams& zeta, const PreparedSeries& data, const ReturnSeries& eps,
                          double ridge) {
    const FilterOutput f = filter_egarch(zeta, data);
    const Eigen::MatrixXd g = grad_egarch(zeta, data, f);
    const Moments mom = score_moments(f, g);
    FitResult r;
    r.model = ModelKind::Egarch;
    r.order = AsLogGarchOrder{1, 1};
    r.params = zeta.to_vector();
    r.free_map = Eigen::MatrixXd::Identity(4, 4);
    r.free_names = egarch_param_names();
    r.free_params = r.params;
    r.n = data.size();
    r.r0 = f.r0;
    r.criterion_value = criterion_from_filter(f);
    r.loglik_per_obs = -0.5 * (std::log(2.0 * std::numbers::pi) + r.criterion_value);
    r.kappa4_hat = 1.0 + mom.kappa_minus_one;
    r.j_hat = mom.j;
    const Eigen::MatrixXd jinv = inverse_with_ridge(r.j_hat, ridge, r.warnings);
    r.cov = mom.kappa_minus_one * jinv / static_cast<double>(r.n - r.r0);
    r.cov = 0.5 * (r.cov + r.cov.transpose());
    r.std_errors = sqrt_diag(r.cov);
    try {
        const InvertibilityCheck inv = egarch_invertibility_check(zeta, eps);
        r.invertibility_mean = inv.mean;
        r.invertible = inv.pass;
        if (!inv.pass)
            r.warnings.push_back("sufficient invertibility condition fails at the estimate (mean " +
                                 std::to_string(inv.mean) + ")");
    } catch (const Error& e) {
        r.warnings.push_back(std::string("invertibility check: ") + e.what());
    }
    return r;
}

}  // namespace

void Box::validate(Eigen::Index dim) const {
    if (lower.size() != dim || upper.size() != dim) throw InvalidArgument("box dimension does not match parameters");
    for (Eigen::Index i = 0; i < dim; ++i)
        if (!(lower[i] < upper[i])) throw InvalidArgument("box lower bound must be below upper bound");
}

bool Box::contains(const Eigen::VectorXd& x) const {
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (!(x[i] >= lower[i] && x[i] <= upper[i])) return false;
    return true;
}

void OptimConfig::validate() const {
    if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
    if (restarts < 1) throw InvalidArgument("at least one restart is required");
    if (max_iters < 1) throw InvalidArgument("max_iters must be positive");
    if (ridge < 0.0) throw InvalidArgument("ridge must be nonnegative");
}

Box default_aslog_box(const AsLogGarchOrder& order, bool restrict_alpha) {
    const std::size_t q = order.q;
    const std::size_t p = order.p;
    const std::size_t k = restrict_alpha ? 2 * q + p + 1 : 3 * q + p + 1;
    Box b{Eigen::VectorXd(static_cast<Eigen::Index>(k)), Eigen::VectorXd(static_cast<Eigen::Index>(k))};
    Eigen::Index i = 0;
    auto put = [&](double lo, double hi, std::size_t count) {
        for (std::size_t c = 0; c < count; ++c, ++i) {
            b.lower[i] = lo;
            b.upper[i] = hi;
        }
    };
    put(-5.0, 5.0, 1 + q);
    put(-1.0, 1.0, restrict_alpha ? q : 2 * q);
    put(-0.999, 0.999, p);
    return b;
}

Box default_egarch_box() {
    Box b{Eigen::VectorXd(4), Eigen::VectorXd(4)};
    b.lower << -5.0, -2.0, -2.0, -0.999;
    b.upper << 5.0, 2.0, 2.0, 0.999;
    return b;
}

Eigen::MatrixXd aslog_free_map(const AsLogGarchOrder& order, bool restrict_alpha) {
    order.validate();
    const auto d = static_cast<Eigen::Index>(order.dim());
    if (!restrict_alpha) return Eigen::MatrixXd::Identity(d, d);
    const auto q = static_cast<Eigen::Index>(order.q);
    const auto p = static_cast<Eigen::Index>(order.p);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, 2 * q + p + 1);
    m(0, 0) = 1.0;
    for (Eigen::Index i = 0; i < q; ++i) {
        m(1 + i, 1 + i) = 1.0;
        m(1 + q + i, 1 + q + i) = 1.0;
        m(1 + 2 * q + i, 1 + q + i) = 1.0;
    }
    for (Eigen::Index j = 0; j < p; ++j) m(1 + 3 * q + j, 1 + 2 * q + j) = 1.0;
    return m;
}

std::vector<std::string> aslog_free_names(const AsLogGarchOrder& order, bool restrict_alpha) {
    if (!restrict_alpha) return aslog_param_names(order);
    std::vector<std::string> names{"omega"};
    for (std::size_t i = 1; i <= order.q; ++i) names.push_back("omega_minus" + std::to_string(i));
    for (std::size_t i = 1; i <= order.q; ++i) names.push_back("alpha" + std::to_string(i));
    for (std::size_t j = 1; j <= order.p; ++j) names.push_back("beta" + std::to_string(j));
    return names;
}

double qmle_criterion(const AsLogGarchParams& theta, const PreparedSeries& data) {
    try {
        return criterion_from_filter(filter_aslog(theta, data));
    } catch (const FilterDivergence&) {
        return kInf;
    }
}

double qmle_criterion(const AsLogGarchParams& theta, const ReturnSeries& eps, const InitPolicy& init) {
    return qmle_criterion(theta, prepare_series(eps.values(), init));
}

double qmle_criterion(const EgarchParams& zeta, const PreparedSeries& data) {
    try {
        return criterion_from_filter(filter_egarch(zeta, data));
    } catch (const FilterDivergence&) {
        return kInf;
    }
}

double qmle_criterion(const EgarchParams& zeta, const ReturnSeries& eps, const InitPolicy& init) {
    return qmle_criterion(zeta, prepare_series(eps.values(), init));
}

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& step, std::size_t max_iters, double tol) {
    const Eigen::Index n = x0.size();
    if (n == 0 || step.size() != n) throw InvalidArgument("nelder_mead: bad dimensions");
    const double dn = static_cast<double>(n);
    const double rho = 1.0;
    const double chi = 1.0 + 2.0 / dn;
    const double gam = 0.75 - 1.0 / (2.0 * dn);
    const double sig = 1.0 - 1.0 / dn;

    std::vector<Eigen::VectorXd> x(static_cast<std::size_t>(n + 1), x0);
    std::vector<double> fx(static_cast<std::size_t>(n + 1));
    fx[0] = f(x0);
    if (!std::isfinite(fx[0])) throw NonConvergence("nelder_mead: criterion is not finite at the start point", 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i + 1)][i] += step[i];
        fx[static_cast<std::size_t>(i + 1)] = f(x[static_cast<std::size_t>(i + 1)]);
    }
    std::vector<std::size_t> idx(static_cast<std::size_t>(n + 1));
    NelderMeadResult out;
    for (std::size_t it = 0; it < max_iters; ++it) {
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
        {
            std::vector<Eigen::VectorXd> xs;
            std::vector<double> fs;
            for (std::size_t k : idx) {
                xs.push_back(x[k]);
                fs.push_back(fx[k]);
            }
            x.swap(xs);
            fx.swap(fs);
        }
        out.iterations = it;
        const double fspread = fx.back() - fx.front();
        double xspread = 0.0;
        for (std::size_t k = 1; k < x.size(); ++k) xspread = std::max(xspread, (x[k] - x[0]).cwiseAbs().maxCoeff());
        if (fspread <= tol * (1.0 + std::abs(fx.front())) && xspread <= 1e-7 * (1.0 + x[0].cwiseAbs().maxCoeff())) {
            out.converged = true;
            break;
        }
        Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
        for (Eigen::Index k = 0; k < n; ++k) c += x[static_cast<std::size_t>(k)];
        c /= dn;
        Eigen::VectorXd& worst = x.back();
        const Eigen::VectorXd xr = c + rho * (c - worst);
        const double fr = f(xr);
        if (fr < fx.front()) {
            const Eigen::VectorXd xe = c + chi * (xr - c);
            const double fe = f(xe);
            if (fe < fr) {
                worst = xe;
                fx.back() = fe;
            } else {
                worst = xr;
                fx.back() = fr;
            }
            continue;
        }
        if (fr < fx[fx.size() - 2]) {
            worst = xr;
            fx.back() = fr;
            continue;
        }
        if (fr < fx.back()) {
            const Eigen::VectorXd xc = c + gam * (xr - c);
            const double fc = f(xc);
            if (fc <= fr) {
                worst = xc;
                fx.back() = fc;
                continue;
            }
        } else {
            const Eigen::VectorXd xc = c + gam * (worst - c);
            const double fc = f(xc);
            if (fc < fx.back()) {
                worst = xc;
                fx.back() = fc;
                continue;
            }
        }
        for (std::size_t k = 1; k < x.size(); ++k) {
            x[k] = x[0] + sig * (x[k] - x[0]);
            fx[k] = f(x[k]);
        }
    }
    const auto best = static_cast<std::size_t>(std::min_element(fx.begin(), fx.end()) - fx.begin());
    out.x = x[best];
    out.f = fx[best];
    return out;
}

FitResult qmle_aslog(const ReturnSeries& eps, const AsLogGarchOrder& order, const OptimConfig& config,
                     const InitPolicy& init, bool restrict_alpha) {
    order.validate();
    config.validate();
    const PreparedSeries data = prepare_series(eps.values(), init);
    if (data.size() <= std::max(order.p, order.q) + order.dim())
        throw InvalidArgument("series too short for the requested order");
    LogProblem prob{data, order, aslog_free_map(order, restrict_alpha),
                    config.box.value_or(default_aslog_box(order, restrict_alpha))};
    prob.box.validate(prob.map.cols());
    const double hbar = log_mean_square(data);
    const Eigen::VectorXd base_step = aslog_step(order, restrict_alpha);
    const Rng master(config.seed);

    auto moments = [&](const Eigen::VectorXd& phi) {
        const AsLogGarchParams th = prob.theta(phi);
        const FilterOutput f = filter_aslog(th, data);
        const Moments m = score_moments(f, grad_aslog(th, data, f));
        return std::make_pair(Eigen::VectorXd(prob.map.transpose() * m.gradient),
                              Eigen::MatrixXd(prob.map.transpose() * m.j * prob.map));
    };
    auto step_to = [](const Eigen::VectorXd& x, const Eigen::VectorXd& d, double lambda) {
        return Eigen::VectorXd(x + lambda * d);
    };

    const RestartOutcome best = best_of_restarts(config, [&](std::size_t r) {
        Rng rng = master.child(r);
        AsLogGarchParams start = aslog_start(order, hbar, false, rng, restrict_alpha);
        if (r > 0) {
            for (int attempt = 0; attempt < 200; ++attempt) {
                start = aslog_start(order, hbar, true, rng, restrict_alpha);
                if (moment_matrix_check(start).pass) break;
            }
        }
        Eigen::VectorXd x0 = clip_to_box(prob.box, aslog_free_from_theta(start, restrict_alpha));
        const NelderMeadResult nm =
            nelder_mead([&](const Eigen::VectorXd& phi) { return prob.value(phi); }, x0,
                        initial_step(prob.box, x0, base_step), config.max_iters, config.tol);
        RestartOutcome out{nm.x, nm.f, nm.iterations, nm.converged};
        if (config.refine && std::isfinite(out.f)) {
            const bool ok = scoring(prob, out.x, out.f, out.iterations, moments, step_to, config.tol);
            out.converged = out.converged || ok;
        }
        return out;
    });
    if (!std::isfinite(best.f))
        throw NonConvergence("QML estimation failed: the criterion was not finite at any restart", best.iterations);
    if (!best.converged) {
        std::string point;
        for (Eigen::Index i = 0; i < best.x.size(); ++i) point += (i ? "," : "") + std::to_string(best.x[i]);
        throw NonConvergence("QML estimation did not converge; best point (" + point + ")", best.iterations);
    }
    FitResult r = finalize_aslog(prob.theta(best.x), data, restrict_alpha, config.ridge);
    r.converged = true;
    r.iterations = best.iterations;
    return r;
}

FitResult evaluate_aslog(const AsLogGarchParams& theta, const ReturnSeries& eps, const InitPolicy& init,
                         bool restrict_alpha, double ridge) {
    theta.validate();
    if (restrict_alpha && !theta.symmetric())
        throw InvalidArgument("restricted evaluation requires alpha_plus == alpha_minus");
    const PreparedSeries data = prepare_series(eps.values(), init);
    FitResult r = finalize_aslog(theta, data, restrict_alpha, ridge);
    r.converged = true;
    return r;
}

FitResult qmle_egarch11(const ReturnSeries& eps, const OptimConfig& config, const InitPolicy& init) {
    config.validate();
    const PreparedSeries data = prepare_series(eps.values(), init);
    if (data.size() <= 10) throw InvalidArgument("series too short for EGARCH estimation");
    EgarchProblem prob{data, config.box.value_or(default_egarch_box())};
    prob.box.validate(4);
    const double hbar = log_mean_square(data);
    const Rng master(config.seed);
    Eigen::VectorXd base_step(4);
    base_step << 0.05, 0.03, 0.05, 0.02;

    auto moments = [&](const Eigen::VectorXd& zeta) {
        const EgarchParams z = EgarchParams::from_vector(zeta);
        const FilterOutput f = filter_egarch(z, data);
        const Moments m = score_moments(f, grad_egarch(z, data, f));
        return std::make_pair(m.gradient, m.j);
    };
    auto step_to = [](const Eigen::VectorXd& x, const Eigen::VectorXd& d, double lambda) {
        Eigen::VectorXd c = x + lambda * d;
        c[2] = std::max(c[2], std::abs(c[1]));
        return c;
    };

    const RestartOutcome best = best_of_restarts(config, [&](std::size_t r) {
        Rng rng = master.child(r);
        auto unif = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
        double beta = 0.95;
        double gamma = 0.0;
        double s = std::sqrt(0.1);
        double jitter = 0.0;
        if (r > 0) {
            beta = unif(0.8, 0.99);
            gamma = unif(-0.1, 0.1);
            s = unif(0.15, 0.5);
            jitter = unif(-0.05, 0.05);
        }
        const double delta = std::abs(gamma) + s * s;
        const double omega = hbar * (1.0 - beta) - kMeanAbsNormal * delta + jitter;
        Eigen::VectorXd x0(4);
        x0 << omega, gamma, s, beta;
        x0 = clip_to_box(prob.box, x0);
        const NelderMeadResult nm =
            nelder_mead([&](const Eigen::VectorXd& phi) { return prob.value_phi(phi); }, x0,
                        initial_step(prob.box, x0, base_step), config.max_iters, config.tol);
        RestartOutcome out{egarch_from_phi(nm.x).to_vector(), nm.f, nm.iterations, nm.converged};
        if (config.refine && std::isfinite(out.f)) {
            const bool ok = scoring(prob, out.x, out.f, out.iterations, moments, step_to, config.tol);
            out.converged = out.converged || ok;
        }
        return out;
    });
    if (!std::isfinite(best.f))
        throw NonConvergence("EGARCH estimation failed: the criterion was not finite at any restart", best.iterations);
    if (!best.converged) {
        std::string point;
        for (Eigen::Index i = 0; i < best.x.size(); ++i) point += (i ? "," : "") + std::to_string(best.x[i]);
        throw NonConvergence("EGARCH estimation did not converge; best point (" + point + ")", best.iterations);
    }
    FitResult r = finalize_egarch(EgarchParams::from_vector(best.x), data, eps, config.ridge);
    r.converged = true;
    r.iterations = best.iterations;
    return r;
}

FitResult evaluate_egarch(const EgarchParams& zeta, const ReturnSeries& eps, const InitPolicy& init, double ridge) {
    zeta.validate();
    const PreparedSeries data = prepare_series(eps.values(), init);
    FitResult r = finalize_egarch(zeta, data, eps, ridge);
    r.converged = true;
    return r;
}

}  // namespace aslg
