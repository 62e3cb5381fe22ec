#include <doctest.h>

#include <cmath>

#include "aslg/errors.hpp"
#include "aslg/estimation.hpp"
#include "aslg/simulate.hpp"

using namespace aslg;

namespace {

const AsLogGarchParams kTheta0 = AsLogGarchParams::pq11(0.01, 0.02, 0.04, 0.05, 0.95);
const EgarchParams kZeta0{-0.15, -0.08, 0.12, 0.95};

}  // namespace

TEST_CASE("Nelder-Mead minimizes the Rosenbrock function") {
    auto f = [](const Eigen::VectorXd& x) { return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2); };
    const NelderMeadResult r = nelder_mead(f, Eigen::Vector2d(-1.2, 1.0), Eigen::Vector2d(0.1, 0.1), 5000, 1e-14);
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("criterion shifts by log c^2 under transported parameters") {
    const ReturnSeries eps = simulate_aslog(kTheta0, 1000, 500, Rng(1)).returns;
    const auto th = AsLogGarchParams::pq11(0.02, -0.01, 0.05, 0.03, 0.9);
    for (double c : {0.1, 7.0, 1000.0}) {
        const double lhs = qmle_criterion(transport_params_under_scaling(th, c), eps.scaled(c));
        CHECK(std::abs(lhs - qmle_criterion(th, eps) - std::log(c * c)) < 1e-10);
    }
}

TEST_CASE("Log-GARCH fit on simulated data") {
    const ReturnSeries eps = simulate_aslog(kTheta0, 4000, 1000, Rng(2)).returns;
    const FitResult fit = qmle_aslog(eps, {1, 1});
    REQUIRE(fit.converged);
    CHECK(fit.criterion_value <= qmle_criterion(kTheta0, eps));
    const Eigen::VectorXd truth = kTheta0.to_vector();
    for (Eigen::Index i = 0; i < 5; ++i) CHECK(std::abs(fit.params[i] - truth[i]) < 4 * fit.std_errors[i]);
    CHECK(std::abs(fit.kappa4_hat - 3.0) < 0.2);
    CHECK(fit.j_hat.isApprox(fit.j_hat.transpose(), 1e-14));
    CHECK(fit.free_names.size() == 5);
    CHECK(fit.r0 == 1);
    CHECK(fit.n == 4000);
}

TEST_CASE("argmin dominance on several datasets") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const ReturnSeries eps = simulate_aslog(kTheta0, 1500, 500, Rng(seed)).returns;
        const FitResult fit = qmle_aslog(eps, {1, 1});
        CHECK(fit.criterion_value <= qmle_criterion(kTheta0, eps) + 1e-12);
    }
}

TEST_CASE("fit on rescaled data is the transported fit") {
    const ReturnSeries eps = simulate_aslog(kTheta0, 2000, 500, Rng(3)).returns;
    const FitResult a = qmle_aslog(eps, {1, 1});
    const FitResult b = qmle_aslog(eps.scaled(5.0), {1, 1});
    const Eigen::VectorXd moved = transport_params_under_scaling(a.aslog_params(), 5.0).to_vector();
    CHECK((b.params - moved).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("restricted fit imposes alpha_+ = alpha_-") {
    const ReturnSeries eps = simulate_aslog(AsLogGarchParams::pq11(0.01, 0.02, 0.05, 0.05, 0.95), 2000, 500, Rng(4))
                                 .returns;
    const FitResult fit = qmle_aslog(eps, {1, 1}, {}, {}, true);
    REQUIRE(fit.converged);
    CHECK(fit.free_params.size() == 4);
    CHECK(fit.params[2] == fit.params[3]);
    CHECK(fit.std_errors.size() == 4);
}

TEST_CASE("EGARCH fit on simulated data") {
    const ReturnSeries eps = simulate_egarch11(kZeta0, 4000, 1000, Rng(5)).returns;
    const FitResult fit = qmle_egarch11(eps);
    REQUIRE(fit.converged);
    CHECK(fit.criterion_value <= qmle_criterion(kZeta0, eps));
    const Eigen::VectorXd truth = kZeta0.to_vector();
    for (Eigen::Index i = 0; i < 4; ++i) CHECK(std::abs(fit.params[i] - truth[i]) < 4 * fit.std_errors[i]);
    CHECK(fit.params[2] >= std::abs(fit.params[1]));
    REQUIRE(fit.invertible.has_value());
    CHECK(*fit.invertible);
}

TEST_CASE("fixed-parameter evaluation and argument checks") {
    const ReturnSeries eps = simulate_aslog(kTheta0, 500, 500, Rng(6)).returns;
    const FitResult ev = evaluate_aslog(kTheta0, eps);
    CHECK(ev.criterion_value == doctest::Approx(qmle_criterion(kTheta0, eps)).epsilon(1e-14));
    CHECK(ev.loglik_per_obs == doctest::Approx(-0.5 * (std::log(2 * M_PI) + ev.criterion_value)));
    CHECK_THROWS_AS((void)evaluate_aslog(kTheta0, eps, {}, true), InvalidArgument);
    OptimConfig bad;
    bad.tol = 0;
    CHECK_THROWS_AS((void)qmle_aslog(eps, {1, 1}, bad), InvalidArgument);
    CHECK_THROWS_AS((void)qmle_egarch11(eps.slice(0, 5)), InvalidArgument);
}

TEST_CASE("restarts in parallel give the same fit as serial") {
    const ReturnSeries eps = simulate_aslog(kTheta0, 1000, 500, Rng(7)).returns;
    OptimConfig serial;
    OptimConfig parallel;
    parallel.threads = 3;
    const FitResult a = qmle_aslog(eps, {1, 1}, serial);
    const FitResult b = qmle_aslog(eps, {1, 1}, parallel);
    CHECK(a.params == b.params);
}
