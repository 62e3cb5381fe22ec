#include <doctest.h>

#include <atomic>
#include <cmath>
#include <set>
#include <vector>

#include "aslg/errors.hpp"
#include "aslg/numerics.hpp"

using namespace aslg;

TEST_CASE("chi2_sf matches reference quantiles") {
    CHECK(chi2_sf(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-10));
    CHECK(chi2_sf(5.991464547107979, 2) == doctest::Approx(0.05).epsilon(1e-10));
    CHECK(chi2_sf(124.3421134, 100) == doctest::Approx(0.05000000002527232).epsilon(1e-9));
    CHECK(chi2_sf(0.5, 7) == doctest::Approx(0.9994464813904249).epsilon(1e-10));
    CHECK(chi2_sf(30.0, 3) == doctest::Approx(1.3800570312932553e-06).epsilon(1e-9));
    CHECK(chi2_sf(1e-3, 1) == doctest::Approx(0.9747728793699604).epsilon(1e-10));
    CHECK(chi2_sf(0.0, 4) == 1.0);
}

TEST_CASE("chi2_sf with two degrees of freedom is exp(-x/2)") {
    for (double x : {0.01, 0.7, 3.0, 12.5, 60.0}) CHECK(chi2_sf(x, 2) == doctest::Approx(std::exp(-x / 2)).epsilon(1e-12));
}

TEST_CASE("chi2_sf is monotone in x and in df") {
    double prev = 1.0;
    for (double x = 0.1; x < 40; x += 0.7) {
        const double p = chi2_sf(x, 5);
        CHECK(p <= prev);
        CHECK(chi2_sf(x, 6) >= p);
        prev = p;
    }
    CHECK_THROWS_AS((void)chi2_sf(1.0, 0), InvalidArgument);
}

TEST_CASE("normal_sf") {
    CHECK(normal_sf(0.0) == 0.5);
    CHECK(normal_sf(1.959963984540054) == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(normal_sf(-0.3) == doctest::Approx(0.6179114221889526).epsilon(1e-12));
    CHECK(normal_sf(5.0) == doctest::Approx(2.866515718791933e-07).epsilon(1e-10));
}

TEST_CASE("Kolmogorov distribution tail against exact finite-sample values") {
    // References: the same matrix recursion evaluated in exact rational arithmetic.
    CHECK(kolmogorov_sf(0.05, 200) == doctest::Approx(0.6802627254395577).epsilon(1e-10));
    CHECK(kolmogorov_sf(0.1, 200) == doctest::Approx(0.03411007078148498).epsilon(1e-9));
    CHECK(kolmogorov_sf(0.115, 200) == doctest::Approx(0.009246308703379058).epsilon(1e-9));
    CHECK(kolmogorov_sf(0.2, 50) == doctest::Approx(0.03143877776953452).epsilon(1e-9));
    CHECK(kolmogorov_sf(0.07, 137) == doctest::Approx(0.491244476380857).epsilon(1e-10));
    CHECK(kolmogorov_sf(0.0, 10) == 1.0);
    CHECK(kolmogorov_sf(0.5, 400) < 1e-40);
}

TEST_CASE("KS statistic of a small sample") {
    CHECK(ks_statistic_uniform({0.1, 0.2, 0.7, 0.95}) == doctest::Approx(0.3));
    CHECK(ks_statistic_uniform({0.5}) == doctest::Approx(0.5));
}

TEST_CASE("solve_spd solves and reports singularity") {
    Eigen::MatrixXd a(3, 3);
    a << 4, 1, 0.5, 1, 3, 0.2, 0.5, 0.2, 2;
    const Eigen::VectorXd b = Eigen::Vector3d(1, -2, 0.5);
    const SpdSolution s = solve_spd(a, b);
    CHECK((a * s.x - b).norm() < 1e-12);
    CHECK(s.min_pivot > 0);

    Eigen::MatrixXd sing(2, 2);
    sing << 1, 1, 1, 1;
    CHECK_THROWS_AS((void)solve_spd(sing, Eigen::Vector2d(1, 1)), SingularMatrix);
    Eigen::MatrixXd asym(2, 2);
    asym << 1, 0.5, 0, 1;
    CHECK_THROWS_AS((void)solve_spd(asym, Eigen::Vector2d(1, 1)), InvalidArgument);
}

TEST_CASE("spectral_radius of nonnegative matrices") {
    Eigen::MatrixXd a(2, 2);
    a << 0.5, 0.3, 1.0, 0.0;
    // eigenvalues of [[0.5,0.3],[1,0]] solve l^2 - 0.5 l - 0.3 = 0
    CHECK(spectral_radius(a) == doctest::Approx((0.5 + std::sqrt(0.25 + 1.2)) / 2).epsilon(1e-9));
    Eigen::MatrixXd nil = Eigen::MatrixXd::Zero(3, 3);
    nil(1, 0) = 1;
    nil(2, 1) = 1;
    CHECK(spectral_radius(nil) == 0.0);
    Eigen::MatrixXd perm(2, 2);
    perm << 0, 1, 1, 0;
    CHECK(spectral_radius(perm) == doctest::Approx(1.0).epsilon(1e-9));
    Eigen::MatrixXd neg(1, 1);
    neg << -1;
    CHECK_THROWS_AS((void)spectral_radius(neg), InvalidArgument);
}

TEST_CASE("finite_diff_gradient of a quadratic") {
    auto f = [](const Eigen::VectorXd& x) { return x[0] * x[0] + 3 * x[0] * x[1]; };
    const Eigen::VectorXd g = finite_diff_gradient(f, Eigen::Vector2d(1, 2), 1e-5);
    CHECK(g[0] == doctest::Approx(8.0).epsilon(1e-8));
    CHECK(g[1] == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("Rng is reproducible and children differ") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
    const Rng master(7);
    Rng c0 = master.child(0), c0b = master.child(0), c1 = master.child(1);
    const double x = c0.uniform();
    CHECK(x == c0b.uniform());
    CHECK(x != c1.uniform());
    std::set<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(master.child(i).seed());
    CHECK(seeds.size() == 1000);
}

TEST_CASE("Rng normals have unit variance and uniforms lie in (0,1)") {
    Rng r(123);
    double s = 0, s2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        s += z;
        s2 += z * z;
        const double u = r.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
    }
    CHECK(std::abs(s / n) < 0.01);
    CHECK(std::abs(s2 / n - 1.0) < 0.015);
}

TEST_CASE("normal_quantile inverts normal_sf") {
    for (double u : {0.001, 0.2, 0.5, 0.8, 0.999}) CHECK(normal_sf(-normal_quantile(u)) == doctest::Approx(u).epsilon(1e-12));
}

TEST_CASE("parallel_for covers every index and rethrows") {
    std::vector<int> hits(97, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, 3,
                                 [](std::size_t i) {
                                     if (i == 6) throw InvalidArgument("six");
                                 }),
                    InvalidArgument);
}
