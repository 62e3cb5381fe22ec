#pragma once

// Volatility filters for the Log-GARCH and EGARCH families and their gradient recursions.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "aslg/core.hpp"

namespace aslg {

/// Presample values and the zero-return floor. Unset fields take data-driven defaults.
struct InitPolicy {
    /// Value of eps^2 at t <= 0; default is the sample mean of eps^2.
    std::optional<double> presample_eps2;
    /// Whether presample returns count as negative.
    bool presample_sign_negative = false;
    /// log sigma^2 at t <= 0; default is log of the sample mean of eps^2.
    std::optional<double> initial_log_sigma2;
    /// |eps_t| below this multiple of the sample standard deviation is floored.
    double zero_return_floor = 1e-6;

    void validate() const;
};

/// A return series with signs and log-squares precomputed under an InitPolicy.
struct PreparedSeries {
    std::vector<double> eps;
    /// 1 when eps_t counts as negative (floored observations count as positive).
    std::vector<unsigned char> negative;
    /// log eps_t^2 after flooring.
    std::vector<double> log_eps2;
    std::size_t floored = 0;
    double floor_abs = 0.0;
    double presample_eps2 = 1.0;
    bool presample_negative = false;
    double initial_log_sigma2 = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return eps.size(); }
    /// Presample return consistent with presample_eps2 and the sign flag.
    [[nodiscard]] double presample_eps() const noexcept;
};

[[nodiscard]] PreparedSeries prepare_series(std::span<const double> eps, const InitPolicy& init);

/// Magnitude of log sigma^2 beyond which a filter is declared divergent.
inline constexpr double kFilterBound = 1400.0;

[[nodiscard]] FilterOutput filter_aslog(const AsLogGarchParams& theta, const ReturnSeries& eps,
                                        const InitPolicy& init = {});
[[nodiscard]] FilterOutput filter_aslog(const AsLogGarchParams& theta, const PreparedSeries& data);

/// Rows are d log sigma_t^2 / d theta (n x (3q+p+1)) under fixed initial values.
[[nodiscard]] Eigen::MatrixXd grad_aslog(const AsLogGarchParams& theta, const ReturnSeries& eps,
                                         const InitPolicy& init = {});
[[nodiscard]] Eigen::MatrixXd grad_aslog(const AsLogGarchParams& theta, const PreparedSeries& data,
                                         const FilterOutput& filtered);

[[nodiscard]] FilterOutput filter_egarch(const EgarchParams& zeta, const ReturnSeries& eps,
                                         const InitPolicy& init = {});
[[nodiscard]] FilterOutput filter_egarch(const EgarchParams& zeta, const PreparedSeries& data);

/// Rows are d log sigma_t^2 / d zeta (n x 4), zeta = (omega, gamma, delta, beta).
[[nodiscard]] Eigen::MatrixXd grad_egarch(const EgarchParams& zeta, const ReturnSeries& eps,
                                          const InitPolicy& init = {});
[[nodiscard]] Eigen::MatrixXd grad_egarch(const EgarchParams& zeta, const PreparedSeries& data,
                                          const FilterOutput& filtered);

[[nodiscard]] FilterOutput filter_augmented_log(const AugmentedLogGarchParams& vartheta,
                                                const ReturnSeries& eps, const InitPolicy& init = {});
[[nodiscard]] FilterOutput filter_augmented_log(const AugmentedLogGarchParams& vartheta,
                                                const PreparedSeries& data);

[[nodiscard]] FilterOutput filter_augmented_egarch(const AugmentedEgarchParams& vartheta,
                                                   const ReturnSeries& eps, const InitPolicy& init = {});
[[nodiscard]] FilterOutput filter_augmented_egarch(const AugmentedEgarchParams& vartheta,
                                                   const PreparedSeries& data);

/// Derivative of the augmented EGARCH log-volatility with respect to the alpha block at alpha = 0.
struct EgarchAlphaGradient {
    /// Row t is D_t, ordered (omega_minus, alpha_plus, alpha_minus) like AugmentedEgarchParams.
    Eigen::MatrixXd d;
    /// u[t] = beta - (gamma eps_t + delta |eps_t|) exp(-log sigma_t^2 / 2) / 2, the multiplier of D_t in D_{t+1}.
    Eigen::VectorXd u;
};

/// Throws InvalidArgument unless every alpha entry of vartheta_c is exactly zero.
[[nodiscard]] EgarchAlphaGradient egarch_grad_alpha(const AugmentedEgarchParams& vartheta_c,
                                                    const ReturnSeries& eps, const InitPolicy& init = {});
[[nodiscard]] EgarchAlphaGradient egarch_grad_alpha(const EgarchParams& zeta, std::size_t q,
                                                    const PreparedSeries& data, const FilterOutput& filtered);

/// Rows are nu_t (n x 2 ell): nu_t = sum_j beta_j nu_{t-j} + (eta+_{t-1}, eta-_{t-1}, ..., eta-_{t-ell}).
/// Residuals before the sample are zero. Throws InvalidModel when the beta polynomial has a root
/// on or inside the unit circle.
[[nodiscard]] Eigen::MatrixXd nu_hat(const FilterOutput& filtered, std::span<const double> beta, std::size_t ell);

/// sigma (not sigma^2) as a function of the previous return for a single-lag model.
[[nodiscard]] std::vector<double> news_impact_curve(const AsLogGarchParams& theta, std::span<const double> grid);

/// Spectral radius of the companion matrix of 1 - beta_1 z - ... - beta_p z^p (0 when p = 0).
[[nodiscard]] double beta_companion_radius(std::span<const double> beta);

}  // namespace aslg
