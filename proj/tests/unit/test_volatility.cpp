#include <doctest.h>

#include <cmath>
#include <vector>

#include "../support/helpers.hpp"
#include "aslg/errors.hpp"
#include "aslg/simulate.hpp"
#include "aslg/volatility.hpp"

using namespace aslg;
using testsupport::fd_jacobian;
using testsupport::max_rel_error;

namespace {

ReturnSeries sample_path(std::size_t n, std::uint64_t seed) {
    return simulate_aslog(AsLogGarchParams::pq11(0.01, 0.02, 0.04, 0.05, 0.95), n, 500, Rng(seed)).returns;
}

}  // namespace

TEST_CASE("filter_aslog reproduces a hand-computed recursion") {
    const ReturnSeries eps({1.0, -2.0, 0.5});
    const auto th = AsLogGarchParams::pq11(0.1, 0.2, 0.05, 0.15, 0.8);
    const FilterOutput f = filter_aslog(th, eps);
    const double m2 = (1.0 + 4.0 + 0.25) / 3.0;
    const double h0 = 0.1 + 0.05 * std::log(m2) + 0.8 * std::log(m2);
    const double h1 = 0.1 + 0.05 * std::log(1.0) + 0.8 * h0;
    const double h2 = 0.1 + 0.2 + 0.15 * std::log(4.0) + 0.8 * h1;
    CHECK(f.log_sigma2[0] == doctest::Approx(h0).epsilon(1e-14));
    CHECK(f.log_sigma2[1] == doctest::Approx(h1).epsilon(1e-14));
    CHECK(f.log_sigma2[2] == doctest::Approx(h2).epsilon(1e-14));
    CHECK(f.residuals[2] == doctest::Approx(0.5 * std::exp(-h2 / 2)).epsilon(1e-14));
    CHECK(f.r0 == 1);
}

TEST_CASE("zero feedback coefficients give the plain filter bit for bit") {
    const ReturnSeries eps = sample_path(300, 3);
    const auto th = AsLogGarchParams::pq11(0.02, -0.03, 0.04, 0.06, 0.9);
    const AugmentedLogGarchParams aug{th, {0.0, 0.0}, {0.0, 0.0}};
    const FilterOutput a = filter_aslog(th, eps);
    const FilterOutput b = filter_augmented_log(aug, eps);
    CHECK(a.log_sigma2 == b.log_sigma2);
    CHECK(b.r0 == 2);

    const EgarchParams z{-0.1, -0.05, 0.1, 0.9};
    const AugmentedEgarchParams aug_e{z, {0.0}, {0.0}, {0.0}};
    CHECK(filter_egarch(z, eps).log_sigma2 == filter_augmented_egarch(aug_e, eps).log_sigma2);
}

TEST_CASE("grad_aslog matches central differences at random parameters") {
    Rng rng(101);
    for (int draw = 0; draw < 5; ++draw) {
        const AsLogGarchParams th = testsupport::random_stationary_theta(rng);
        const ReturnSeries eps = sample_path(200, 200 + draw);
        const auto order = th.order();
        const Eigen::MatrixXd analytic = grad_aslog(th, eps);
        const Eigen::MatrixXd fd = fd_jacobian(
            [&](const Eigen::VectorXd& x) { return filter_aslog(AsLogGarchParams::from_vector(order, x), eps).log_sigma2; },
            th.to_vector(), 1e-6);
        CHECK(max_rel_error(analytic, fd) < 1e-6);
    }
}

TEST_CASE("grad_aslog for p = q = 2") {
    AsLogGarchParams th;
    th.omega = 0.01;
    th.omega_minus = {0.02, -0.01};
    th.alpha_plus = {0.03, 0.01};
    th.alpha_minus = {0.05, 0.02};
    th.beta = {0.6, 0.3};
    const ReturnSeries eps = sample_path(200, 9);
    const Eigen::MatrixXd fd = fd_jacobian(
        [&](const Eigen::VectorXd& x) { return filter_aslog(AsLogGarchParams::from_vector(th.order(), x), eps).log_sigma2; },
        th.to_vector(), 1e-6);
    CHECK(max_rel_error(grad_aslog(th, eps), fd) < 1e-6);
}

TEST_CASE("grad_egarch matches central differences") {
    Rng rng(5);
    for (int draw = 0; draw < 5; ++draw) {
        const EgarchParams z = testsupport::random_egarch_zeta(rng);
        const ReturnSeries eps = simulate_egarch11(z, 200, 500, Rng(40 + draw)).returns;
        const Eigen::MatrixXd fd = fd_jacobian(
            [&](const Eigen::VectorXd& x) { return filter_egarch(EgarchParams::from_vector(x), eps).log_sigma2; },
            z.to_vector(), 1e-6);
        CHECK(max_rel_error(grad_egarch(z, eps), fd) < 1e-6);
    }
}

TEST_CASE("egarch_grad_alpha matches differences of the augmented filter at alpha = 0") {
    const EgarchParams z{-0.15, -0.08, 0.12, 0.95};
    const ReturnSeries eps = simulate_egarch11(z, 200, 500, Rng(77)).returns;
    for (std::size_t q : {1u, 2u}) {
        auto filt = [&](const Eigen::VectorXd& a) {
            AugmentedEgarchParams v{z, {}, {}, {}};
            for (std::size_t i = 0; i < q; ++i) {
                v.omega_minus.push_back(a[static_cast<Eigen::Index>(i)]);
                v.alpha_plus.push_back(a[static_cast<Eigen::Index>(q + i)]);
                v.alpha_minus.push_back(a[static_cast<Eigen::Index>(2 * q + i)]);
            }
            return filter_augmented_egarch(v, eps).log_sigma2;
        };
        const Eigen::MatrixXd fd = fd_jacobian(filt, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(3 * q)), 1e-6);
        const AugmentedEgarchParams at0{z, std::vector<double>(q, 0.0), std::vector<double>(q, 0.0),
                                        std::vector<double>(q, 0.0)};
        CHECK(max_rel_error(egarch_grad_alpha(at0, eps).d, fd) < 1e-6);
    }
    AugmentedEgarchParams bad{z, {0.1}, {0.0}, {0.0}};
    CHECK_THROWS_AS((void)egarch_grad_alpha(bad, eps), InvalidArgument);
}

TEST_CASE("nu_hat is the derivative of the augmented filter in gamma away from the presample") {
    const auto th = AsLogGarchParams::pq11(0.01, 0.02, 0.04, 0.05, 0.5);
    const ReturnSeries eps = sample_path(200, 11);
    const std::size_t ell = 2;
    auto filt = [&](const Eigen::VectorXd& g) {
        AugmentedLogGarchParams v{th, {g[0], g[2]}, {g[1], g[3]}};
        return filter_augmented_log(v, eps).log_sigma2;
    };
    const Eigen::MatrixXd fd = fd_jacobian(filt, Eigen::VectorXd::Zero(4), 1e-6);
    const Eigen::MatrixXd nu = nu_hat(filter_aslog(th, eps), th.beta, ell);
    CHECK(max_rel_error(nu.bottomRows(140), fd.bottomRows(140)) < 1e-6);
    CHECK(nu.row(0).isZero());
    CHECK_THROWS_AS((void)nu_hat(filter_aslog(th, eps), std::vector<double>{1.0}, 1), InvalidModel);
}

TEST_CASE("rescaling returns shifts log-volatility by log c^2 under transported parameters") {
    const ReturnSeries eps = sample_path(500, 21);
    const auto th = AsLogGarchParams::pq11(0.03, -0.04, 0.05, 0.08, 0.9);
    for (double c : {0.01, 3.0, 250.0}) {
        const FilterOutput a = filter_aslog(th, eps);
        const FilterOutput b = filter_aslog(transport_params_under_scaling(th, c), eps.scaled(c));
        double worst = 0, worst_eta = 0;
        for (std::size_t t = 0; t < eps.size(); ++t) {
            worst = std::max(worst, std::abs(b.log_sigma2[t] - a.log_sigma2[t] - std::log(c * c)));
            worst_eta = std::max(worst_eta, std::abs(b.residuals[t] - a.residuals[t]));
        }
        CHECK(worst < 1e-10);
        CHECK(worst_eta < 1e-10);
    }
}

TEST_CASE("zero returns are floored and counted") {
    const ReturnSeries base = sample_path(100, 4);
    std::vector<double> v(base.values().begin(), base.values().end());
    v[10] = 0.0;
    v[20] = -0.0;
    const PreparedSeries d = prepare_series(v, {});
    CHECK(d.floored == 2);
    CHECK(d.negative[20] == 0);
    CHECK(d.log_eps2[10] == doctest::Approx(2 * std::log(d.floor_abs)));
    CHECK(filter_aslog(AsLogGarchParams::pq11(0.0, 0.0, 0.05, 0.05, 0.9), ReturnSeries(v)).floored == 2);
    CHECK_THROWS_AS((void)prepare_series(std::vector<double>(5, 0.0), {}), InvalidArgument);
}

TEST_CASE("presample policy overrides the defaults") {
    const ReturnSeries eps({0.5, -1.5, 2.0, -0.1});
    InitPolicy init;
    init.presample_eps2 = 4.0;
    init.presample_sign_negative = true;
    init.initial_log_sigma2 = 0.3;
    const auto th = AsLogGarchParams::pq11(0.1, 0.2, 0.05, 0.15, 0.8);
    const FilterOutput f = filter_aslog(th, eps, init);
    CHECK(f.log_sigma2[0] == doctest::Approx(0.1 + 0.2 + 0.15 * std::log(4.0) + 0.8 * 0.3).epsilon(1e-14));
    InitPolicy bad;
    bad.presample_eps2 = -1.0;
    CHECK_THROWS_AS((void)filter_aslog(th, eps, bad), InvalidArgument);
}

TEST_CASE("explosive parameters raise FilterDivergence with the failing index") {
    const ReturnSeries eps = sample_path(2000, 8);
    const auto th = AsLogGarchParams::pq11(1.0, 0.0, 0.0, 0.0, 1.0);
    try {
        (void)filter_aslog(th, eps);
        FAIL("expected divergence");
    } catch (const FilterDivergence& e) {
        CHECK(e.t() > 0);
        CHECK(e.t() < eps.size());
    }
}

TEST_CASE("news impact curve") {
    const auto th = AsLogGarchParams::pq11(0.1, 0.2, 0.05, 0.15, 0.9);
    const std::vector<double> grid{-2.0, -0.5, 0.5, 2.0};
    const std::vector<double> s = news_impact_curve(th, grid);
    CHECK(s[3] == doctest::Approx(std::exp(0.5 * (0.1 + 0.05 * std::log(4.0)))).epsilon(1e-14));
    CHECK(s[0] == doctest::Approx(std::exp(0.5 * (0.3 + 0.15 * std::log(4.0)))).epsilon(1e-14));
    CHECK(s[0] > s[3]);
    const auto sym = AsLogGarchParams::pq11(0.1, 0.0, 0.05, 0.05, 0.9);
    const std::vector<double> t = news_impact_curve(sym, grid);
    CHECK(t[0] == t[3]);
    CHECK_THROWS_AS((void)news_impact_curve(th, std::vector<double>{0.0}), InvalidArgument);
}
