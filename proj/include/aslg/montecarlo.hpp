#pragma once

// Seeded size/power experiments: simulate, fit the null model, run the tests.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "aslg/core.hpp"
#include "aslg/estimation.hpp"
#include "aslg/sptests.hpp"

namespace aslg {

enum class McTest { Lm, Portmanteau };

[[nodiscard]] std::string to_string(McTest test);
[[nodiscard]] McTest mc_test_from_string(const std::string& s);
[[nodiscard]] ModelKind model_kind_from_string(const std::string& s);

/// Log-GARCH(1,1) parameter of the simulation study: (0.01, 0.02, 0.04, 0.05, 0.95).
[[nodiscard]] AsLogGarchParams default_mc_theta();
/// EGARCH(1,1) parameter of the simulation study: (-0.15, -0.08, 0.12, 0.95).
[[nodiscard]] EgarchParams default_mc_zeta();

struct MonteCarloConfig {
    ModelKind dgp = ModelKind::AsLog;
    ModelKind null = ModelKind::AsLog;
    std::vector<McTest> tests{McTest::Lm};
    std::vector<std::size_t> lags{1};
    std::size_t n = 4000;
    std::size_t reps = 200;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::size_t burn = 1000;
    AsLogGarchParams theta0 = default_mc_theta();
    EgarchParams zeta0 = default_mc_zeta();
    OptimConfig optim;
    LmOptions lm;

    void validate() const;
};

struct MonteCarloResult {
    MonteCarloConfig config;
    /// p_values[test][lag][rep]; NaN for failed replications.
    std::vector<std::vector<std::vector<double>>> p_values;
    /// Per replication: empty when it succeeded, else the error message.
    std::vector<std::string> errors;

    [[nodiscard]] std::size_t failures() const;
    /// Share of successful replications with p < level.
    [[nodiscard]] double rejection(std::size_t test, std::size_t lag, double level) const;
    /// Successful p-values for one (test, lag) cell.
    [[nodiscard]] std::vector<double> valid_p_values(std::size_t test, std::size_t lag) const;
};

/// Runs every replication; replication i simulates with Rng(seed).child(i) and seeds the optimizer
/// from the same child, so results do not depend on the worker count.
[[nodiscard]] MonteCarloResult run_montecarlo(const MonteCarloConfig& config);

/// One row per (test, lag): rejection frequencies at 1/5/10% with binomial standard errors.
[[nodiscard]] std::string montecarlo_csv(const MonteCarloResult& result);

}  // namespace aslg
