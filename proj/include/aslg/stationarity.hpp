#pragma once

// Strict-stationarity, moment and invertibility diagnostics.

#include <cstddef>
#include <string>

#include "aslg/core.hpp"
#include "aslg/numerics.hpp"

namespace aslg {

enum class StationarityVerdict { Stationary, Nonstationary, Inconclusive };

[[nodiscard]] std::string to_string(StationarityVerdict v);

struct LyapunovEstimate {
    double gamma_hat = 0.0;
    /// Standard error of gamma_hat across replications.
    double std_err = 0.0;
    std::size_t horizon = 0;
    std::size_t reps = 0;

    /// Stationary when gamma_hat + 2 se < 0, nonstationary when gamma_hat - 2 se > 0.
    [[nodiscard]] StationarityVerdict verdict() const noexcept;
};

inline constexpr std::size_t kDefaultLyapunovHorizon = 2000;
inline constexpr std::size_t kDefaultLyapunovReps = 50;

/// Monte Carlo estimate of the top Lyapunov exponent of the companion matrices C_t.
///
/// C_t depends on the innovations only through their signs, so each replication draws a sign
/// sequence with P(eta > 0) = prob_positive. The matrix product is renormalized (Frobenius) every
/// 25 steps, and the replication estimate is the growth of log ||C_t ... C_1|| between t = T/10 and
/// t = T, divided by the elapsed steps.
[[nodiscard]] LyapunovEstimate lyapunov_exponent_mc(const AsLogGarchParams& theta, double prob_positive,
                                                    std::size_t horizon, std::size_t reps, const Rng& rng);

/// a log|alpha_+ + beta| + (1 - a) log|alpha_- + beta| for p = q = 1 (may be -infinity).
[[nodiscard]] double stationarity_pq11_closed_form(const AsLogGarchParams& theta, double prob_positive);

struct MomentCheck {
    double spectral_radius = 0.0;
    bool pass = false;
};

/// Spectral radius of the companion matrix whose first row holds max(|alpha_i+ + beta_i|, |alpha_i- + beta_i|).
[[nodiscard]] MomentCheck moment_matrix_check(const AsLogGarchParams& theta);

struct InvertibilityCheck {
    double mean = 0.0;
    bool pass = false;
    /// Observations whose inner maximum was at or below the floor.
    std::size_t floored = 0;
};

/// Sample mean of log max{beta, (gamma e + delta |e|) exp(-omega / (2 (1 - beta))) / 2 - beta}.
/// Throws Error when every observation hits the floor.
[[nodiscard]] InvertibilityCheck egarch_invertibility_check(const EgarchParams& zeta, const ReturnSeries& eps,
                                                            double floor = 1e-300);

}  // namespace aslg
