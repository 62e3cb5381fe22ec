#pragma once

// One-step-ahead variance forecasts at frozen parameters, loss functions and the Diebold-Mariano test.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aslg/core.hpp"
#include "aslg/volatility.hpp"

namespace aslg {

/// sigma_t^2 for t = split_index .. n-1, filtering the full series with the fit's parameters.
[[nodiscard]] std::vector<double> oos_forecast(const FitResult& fit, const ReturnSeries& full_series,
                                               std::size_t split_index, const InitPolicy& init = {});

enum class LossKind { MSE, MAE, LogMSE, LogMAE };

[[nodiscard]] std::string to_string(LossKind kind);
[[nodiscard]] LossKind loss_kind_from_string(const std::string& s);
inline constexpr LossKind kAllLosses[] = {LossKind::MSE, LossKind::MAE, LossKind::LogMSE, LossKind::LogMAE};

/// Pointwise losses. For the log losses, eps2 values at or below eps2_floor are replaced by it.
[[nodiscard]] std::vector<double> loss_series(std::span<const double> eps2, std::span<const double> sigma2_hat,
                                              LossKind kind, double eps2_floor = 0.0);

struct DieboldMarianoResult {
    double statistic = 0.0;
    /// One-sided p-value of the alternative that b is less accurate than a.
    double p_value = 0.0;
    double mean_differential = 0.0;
    std::size_t n = 0;
};

/// d_t = loss_b - loss_a, statistic mean(d) / sqrt(var(d) / n). var is the plain sample variance
/// (divisor n) unless hac_lag is set, in which case Bartlett weights 1 - k/(L+1) add autocovariances.
[[nodiscard]] DieboldMarianoResult diebold_mariano(std::span<const double> loss_a, std::span<const double> loss_b,
                                                   std::optional<std::size_t> hac_lag = {});

}  // namespace aslg
