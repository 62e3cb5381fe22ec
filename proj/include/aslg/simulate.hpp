#pragma once

// Seeded simulators and the symmetric EGARCH to Log-GARCH conversion.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "aslg/core.hpp"
#include "aslg/numerics.hpp"

namespace aslg {

/// Draws one unit-variance innovation. An empty sampler means standard normal.
using InnovationSampler = std::function<double(Rng&)>;

inline constexpr std::size_t kDefaultBurnIn = 1000;
/// |log sigma^2| above this aborts a simulation.
inline constexpr double kSimulationGuard = 700.0;

struct SimulatedPath {
    ReturnSeries returns;
    /// True log sigma_t^2 aligned with returns.
    std::vector<double> log_sigma2;
    /// Innovations eta_t = eps_t / sigma_t.
    std::vector<double> innovations;
};

/// Log-GARCH path started from zero log-volatilities; the first `burn` draws are discarded.
[[nodiscard]] SimulatedPath simulate_aslog(const AsLogGarchParams& theta, std::size_t n, std::size_t burn, Rng rng,
                                           const InnovationSampler& sampler = {});

/// EGARCH(1,1) path started at log sigma^2 = omega / (1 - beta).
[[nodiscard]] SimulatedPath simulate_egarch11(const EgarchParams& zeta, std::size_t n, std::size_t burn, Rng rng,
                                              const InnovationSampler& sampler = {});

/// Log-GARCH with feedback of past standardized returns; gamma = 0 reproduces simulate_aslog.
[[nodiscard]] SimulatedPath simulate_augmented(const AugmentedLogGarchParams& vartheta, std::size_t n,
                                               std::size_t burn, Rng rng, const InnovationSampler& sampler = {});

/// log E exp(|Z|) for standard normal Z, i.e. log(2 exp(1/2) Phi(1)).
[[nodiscard]] double gaussian_log_mean_exp_abs();

struct LogGarchConversion {
    AsLogGarchParams theta;
    /// eta_t = exp(|eta~_t| / 2) sign(eta~_t) / sqrt(E exp|eta~|).
    std::vector<double> eta;
    double log_mean_exp_abs = 0.0;
};

/// Symmetric EGARCH(1,1) (gamma = 0, delta = gamma_sym != 0) as a Log-GARCH(1,1) with the same
/// volatility. When log_mean_exp_abs is absent it is estimated from eta_tilde.
[[nodiscard]] LogGarchConversion egarch_to_loggarch_symmetric(const EgarchParams& zeta,
                                                              std::span<const double> eta_tilde,
                                                              std::optional<double> log_mean_exp_abs = {});

}  // namespace aslg
