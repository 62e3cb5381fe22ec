#pragma once

// JSON serialization of fits and test reports.

#include <json.hpp>

#include "aslg/core.hpp"

namespace aslg {

/// {model, order, restrict_alpha, n, r0, params, std_errors, loglik_per_obs, kappa4, ...}.
[[nodiscard]] nlohmann::json fit_to_json(const FitResult& fit);

/// {name, statistic, df, p_value, warnings}; with_components adds the matrices as nested arrays.
[[nodiscard]] nlohmann::json test_to_json(const TestReport& report, bool with_components = false);

[[nodiscard]] nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);

}  // namespace aslg
