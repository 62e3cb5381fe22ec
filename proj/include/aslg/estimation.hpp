#pragma once

// Gaussian QML estimation of the Log-GARCH and EGARCH(1,1) models.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "aslg/core.hpp"
#include "aslg/volatility.hpp"

namespace aslg {

/// Coordinate bounds of the optimizer's search space.
struct Box {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    void validate(Eigen::Index dim) const;
    [[nodiscard]] bool contains(const Eigen::VectorXd& x) const;
};

struct OptimConfig {
    /// Simplex iterations per restart.
    std::size_t max_iters = 4000;
    /// Convergence tolerance on criterion change.
    double tol = 1e-10;
    /// Number of simplex starts (the first from a data-driven point, the rest random).
    std::size_t restarts = 3;
    /// Bounds on the optimizer coordinates; defaults depend on the model.
    std::optional<Box> box;
    /// Added (times trace/dim) to the information diagonal when it is singular; 0 raises instead.
    double ridge = 0.0;
    /// Seed for the random restart points.
    std::uint64_t seed = 20240601;
    /// Workers for restarts.
    unsigned threads = 1;
    /// Gauss-Newton scoring after the simplex.
    bool refine = true;

    void validate() const;
};

/// Default box over the free Log-GARCH coordinates: omega, omega_minus in [-5,5], alpha in [-1,1],
/// beta in [-0.999,0.999].
[[nodiscard]] Box default_aslog_box(const AsLogGarchOrder& order, bool restrict_alpha);

/// Default EGARCH box over (omega, gamma, s, beta) with delta = |gamma| + s^2.
[[nodiscard]] Box default_egarch_box();

/// Linear map theta = M * phi from free to full Log-GARCH coordinates.
[[nodiscard]] Eigen::MatrixXd aslog_free_map(const AsLogGarchOrder& order, bool restrict_alpha);
[[nodiscard]] std::vector<std::string> aslog_free_names(const AsLogGarchOrder& order, bool restrict_alpha);

/// (n - r0)^{-1} sum_{t >= r0} (eps_t^2 / sigma_t^2 + log sigma_t^2); +infinity when the filter diverges.
[[nodiscard]] double qmle_criterion(const AsLogGarchParams& theta, const ReturnSeries& eps,
                                    const InitPolicy& init = {});
[[nodiscard]] double qmle_criterion(const AsLogGarchParams& theta, const PreparedSeries& data);
[[nodiscard]] double qmle_criterion(const EgarchParams& zeta, const ReturnSeries& eps, const InitPolicy& init = {});
[[nodiscard]] double qmle_criterion(const EgarchParams& zeta, const PreparedSeries& data);

[[nodiscard]] FitResult qmle_aslog(const ReturnSeries& eps, const AsLogGarchOrder& order,
                                   const OptimConfig& config = {}, const InitPolicy& init = {},
                                   bool restrict_alpha = false);

[[nodiscard]] FitResult qmle_egarch11(const ReturnSeries& eps, const OptimConfig& config = {},
                                      const InitPolicy& init = {});

/// FitResult at fixed parameters (no optimization): J, kappa4, covariance and criterion.
[[nodiscard]] FitResult evaluate_aslog(const AsLogGarchParams& theta, const ReturnSeries& eps,
                                       const InitPolicy& init = {}, bool restrict_alpha = false,
                                       double ridge = 0.0);
[[nodiscard]] FitResult evaluate_egarch(const EgarchParams& zeta, const ReturnSeries& eps,
                                        const InitPolicy& init = {}, double ridge = 0.0);

struct NelderMeadResult {
    Eigen::VectorXd x;
    double f = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Adaptive-coefficient Nelder-Mead; f may return +infinity to reject a point.
[[nodiscard]] NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                                           const Eigen::VectorXd& x0, const Eigen::VectorXd& step,
                                           std::size_t max_iters, double tol);

}  // namespace aslg
