#include "aslg/sptests.hpp"

#include <algorithm>
#include <cmath>

#include "aslg/errors.hpp"
#include "aslg/numerics.hpp"

namespace aslg {

namespace {

struct FittedPaths {
    PreparedSeries data;
    FilterOutput filtered;
    /// Gradient of log sigma_t^2 in the fit's free coordinates (n x k).
    Eigen::MatrixXd grad;
};

FittedPaths fitted_paths(const FitResult& fit, const ReturnSeries& eps, const InitPolicy& init) {
    if (fit.n != eps.size()) throw InvalidArgument("fit and series differ in length");
    FittedPaths out{prepare_series(eps.values(), init), {}, {}};
    if (fit.model == ModelKind::AsLog) {
        const AsLogGarchParams th = fit.aslog_params();
        out.filtered = filter_aslog(th, out.data);
        out.grad = grad_aslog(th, out.data, out.filtered) * fit.free_map;
    } else {
        const EgarchParams z = fit.egarch_params();
        out.filtered = filter_egarch(z, out.data);
        out.grad = grad_egarch(z, out.data, out.filtered);
    }
    return out;
}

Eigen::VectorXd solve_with_ridge(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double ridge,
                                 const std::string& what, std::vector<std::string>& warnings) {
    try {
        return solve_spd(a, b).x;
    } catch (const SingularMatrix& e) {
        if (ridge <= 0.0) throw SingularMatrix(what + " is singular", e.pivot());
        const double lambda = ridge * a.trace() / static_cast<double>(a.rows());
        warnings.push_back(what + " singular (pivot " + std::to_string(e.pivot()) + "); ridge " +
                           std::to_string(lambda) + " added");
        return solve_spd(a + lambda * Eigen::MatrixXd::Identity(a.rows(), a.cols()), b).x;
    }
}

Eigen::MatrixXd as_matrix(double x) { return Eigen::MatrixXd::Constant(1, 1, x); }

struct LmLabels {
    const char* score;
    const char* info;
    const char* b11;
    const char* b12;
    const char* cross;
    const char* gram;
};

constexpr LmLabels kAsLogLabels{"S_n", "I_hat", "J11_hat", "J12_hat", "Omega_hat", "J_hat"};
constexpr LmLabels kEgarchLabels{"T_n", "L_hat", "K11_hat", "K12_hat", "Psi_hat", "V_hat"};

// Shared LM assembly: x holds the extra score regressors (nu or D), g the null-model gradient.
TestReport lm_statistic(TestKind kind, const LmLabels& labels, const FilterOutput& f, const Eigen::MatrixXd& x,
                        const Eigen::MatrixXd& g, const LmOptions& opt) {
    const std::size_t r0 = f.r0;
    const auto rows = static_cast<Eigen::Index>(f.residuals.size() - r0);
    const double m = static_cast<double>(rows);
    const Eigen::MatrixXd xs = x.bottomRows(rows);
    const Eigen::MatrixXd gs = g.bottomRows(rows);
    Eigen::VectorXd w(rows);
    for (Eigen::Index t = 0; t < rows; ++t) {
        const double e = f.residuals[r0 + static_cast<std::size_t>(t)];
        w[t] = 1.0 - e * e;
    }
    TestReport rep;
    rep.name = kind;
    rep.df = static_cast<int>(x.cols());
    const double kappa_m1 = w.squaredNorm() / m;
    if (!(kappa_m1 > 0.0)) throw SingularMatrix("kappa4 - 1 is zero; residuals are degenerate", 0.0);
    const Eigen::VectorXd s = xs.transpose() * w / std::sqrt(m);
    const Eigen::MatrixXd j = gs.transpose() * gs / m;
    const Eigen::MatrixXd omega = xs.transpose() * gs / m;
    const Eigen::MatrixXd xx = xs.transpose() * xs / m;
    const Eigen::VectorXd xbar = xs.colwise().mean().transpose();
    const Eigen::VectorXd gbar = gs.colwise().mean().transpose();

    Eigen::MatrixXd jinv_omega_t;  // J^{-1} Omega'
    Eigen::MatrixXd jinv_centered_t;
    try {
        jinv_omega_t = solve_spd(j, omega.transpose()).x;
        jinv_centered_t = solve_spd(j, (omega - xbar * gbar.transpose()).transpose()).x;
    } catch (const SingularMatrix& e) {
        throw SingularMatrix("null-model information matrix is singular", e.pivot());
    }
    const Eigen::MatrixXd b11 = xx - xbar * xbar.transpose();
    const Eigen::MatrixXd b12 = -jinv_centered_t.transpose();
    Eigen::MatrixXd info;
    if (opt.form == CovarianceForm::Uncentered) {
        info = xx - omega * jinv_omega_t;
    } else {
        info = b11 + omega * jinv_omega_t + b12 * omega.transpose() + omega * b12.transpose();
        rep.warnings.push_back("information matrix uses the centered form");
    }
    info = 0.5 * (info + info.transpose());
    const Eigen::VectorXd v = solve_with_ridge(info, s, opt.ridge, std::string(labels.info), rep.warnings);
    rep.statistic = std::max(0.0, s.dot(v) / kappa_m1);
    rep.p_value = chi2_sf(rep.statistic, rep.df);
    rep.components[labels.score] = s;
    rep.components[labels.info] = info;
    rep.components[labels.b11] = b11;
    rep.components[labels.b12] = b12;
    rep.components[labels.cross] = omega;
    rep.components[labels.gram] = j;
    rep.components["kappa4_hat"] = as_matrix(kappa_m1 + 1.0);
    return rep;
}

}  // namespace

std::string to_string(CovarianceForm form) {
    return form == CovarianceForm::Uncentered ? "uncentered" : "displayed";
}

CovarianceForm covariance_form_from_string(const std::string& s) {
    if (s == "uncentered") return CovarianceForm::Uncentered;
    if (s == "displayed" || s == "centered") return CovarianceForm::Displayed;
    throw InvalidArgument("unknown covariance form '" + s + "' (expected uncentered or displayed)");
}

TestReport lm_test_aslog_vs_augmented(const FitResult& fit, const ReturnSeries& eps, std::size_t ell,
                                      const InitPolicy& init, const LmOptions& options) {
    if (fit.model != ModelKind::AsLog) throw InvalidArgument("LM Log-GARCH test requires a Log-GARCH fit");
    if (!fit.converged) throw InvalidArgument("LM test requires a converged fit");
    if (ell < 1) throw InvalidArgument("ell must be at least 1");
    const FittedPaths fp = fitted_paths(fit, eps, init);
    const AsLogGarchParams th = fit.aslog_params();
    const Eigen::MatrixXd nu = nu_hat(fp.filtered, th.beta, ell);
    return lm_statistic(TestKind::LmAsLog, kAsLogLabels, fp.filtered, nu, fp.grad, options);
}

TestReport lm_test_egarch_vs_loggarch(const FitResult& fit, const ReturnSeries& eps, std::size_t q,
                                      const InitPolicy& init, const LmOptions& options) {
    if (fit.model != ModelKind::Egarch) throw InvalidArgument("LM EGARCH test requires an EGARCH fit");
    if (!fit.converged) throw InvalidArgument("LM test requires a converged fit");
    if (q < 1) throw InvalidArgument("q must be at least 1");
    const FittedPaths fp = fitted_paths(fit, eps, init);
    const EgarchAlphaGradient d = egarch_grad_alpha(fit.egarch_params(), q, fp.data, fp.filtered);
    return lm_statistic(TestKind::LmEgarch, kEgarchLabels, fp.filtered, d.d, fp.grad, options);
}

TestReport portmanteau_test(const FitResult& fit, const ReturnSeries& eps, std::size_t m, const InitPolicy& init,
                            double ridge) {
    if (!fit.converged) throw InvalidArgument("portmanteau test requires a converged fit");
    const FittedPaths fp = fitted_paths(fit, eps, init);
    const std::size_t r0 = fp.filtered.r0;
    const std::size_t neff = eps.size() - r0;
    if (m < 1 || m >= neff) throw InvalidArgument("portmanteau lag m must satisfy 1 <= m < n - r0");
    const double dn = static_cast<double>(neff);

    TestReport rep;
    rep.name = fit.model == ModelKind::AsLog ? TestKind::PortmanteauAsLog : TestKind::PortmanteauEgarch;
    rep.df = static_cast<int>(m);
    std::vector<double> u(neff);  // eta_t^2 - 1 over the effective sample
    for (std::size_t t = 0; t < neff; ++t) {
        const double e = fp.filtered.residuals[r0 + t];
        u[t] = e * e - 1.0;
    }
    const auto mm = static_cast<Eigen::Index>(m);
    const auto k = fp.grad.cols();
    Eigen::VectorXd r = Eigen::VectorXd::Zero(mm);
    Eigen::MatrixXd km = Eigen::MatrixXd::Zero(mm, k);
    for (Eigen::Index h = 1; h <= mm; ++h) {
        double acc = 0.0;
        for (std::size_t t = static_cast<std::size_t>(h); t < neff; ++t) {
            acc += u[t] * u[t - static_cast<std::size_t>(h)];
            km.row(h - 1) += u[t - static_cast<std::size_t>(h)] * fp.grad.row(static_cast<Eigen::Index>(r0 + t));
        }
        r[h - 1] = acc / dn;
    }
    km /= dn;
    rep.components["r_hat"] = r;
    if (r.isZero(0.0)) {
        rep.statistic = 0.0;
        rep.p_value = 1.0;
        rep.warnings.push_back("squared-residual autocovariances are identically zero");
        return rep;
    }
    double kappa_m1 = 0.0;
    for (double x : u) kappa_m1 += x * x;
    kappa_m1 /= dn;
    const Eigen::MatrixXd gs = fp.grad.bottomRows(static_cast<Eigen::Index>(neff));
    const Eigen::MatrixXd j = gs.transpose() * gs / dn;
    Eigen::MatrixXd jinv_kt;
    try {
        jinv_kt = solve_spd(j, km.transpose()).x;
    } catch (const SingularMatrix& e) {
        throw SingularMatrix("null-model information matrix is singular", e.pivot());
    }
    Eigen::MatrixXd d = kappa_m1 * kappa_m1 * Eigen::MatrixXd::Identity(mm, mm) - kappa_m1 * km * jinv_kt;
    d = 0.5 * (d + d.transpose());
    const Eigen::VectorXd v = solve_with_ridge(d, r, ridge, "portmanteau matrix D", rep.warnings);
    rep.statistic = std::max(0.0, dn * r.dot(v));
    rep.p_value = chi2_sf(rep.statistic, rep.df);
    rep.components["K_hat"] = km;
    rep.components["D_hat"] = d;
    rep.components["J_hat"] = j;
    rep.components["kappa4_hat"] = as_matrix(kappa_m1 + 1.0);
    return rep;
}

}  // namespace aslg
