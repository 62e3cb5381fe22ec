#pragma once

// Special functions, a symmetric solver, power iteration and seeded random streams.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace aslg {

/// Upper tail P(chi2_df > x) via the regularized incomplete gamma function.
[[nodiscard]] double chi2_sf(double x, int df);

/// Upper tail P(Z > x) of the standard normal.
[[nodiscard]] double normal_sf(double x);

/// Asymptotic Kolmogorov tail with the Stephens small-sample correction: P(D_n > d).
[[nodiscard]] double kolmogorov_sf(double d, std::size_t n);

/// One-sample KS statistic of a sample against Uniform(0,1).
[[nodiscard]] double ks_statistic_uniform(std::vector<double> sample);

struct SpdSolution {
    Eigen::MatrixXd x;
    double min_pivot = 0.0;
};

/// Solve a * x = b for symmetric positive definite a by LDL' factorization.
/// Throws SingularMatrix when a pivot falls at or below pivot_tol * max|diag(a)|.
[[nodiscard]] SpdSolution solve_spd(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                    double pivot_tol = 1e-12);

/// Spectral radius of a nonnegative square matrix by power iteration.
[[nodiscard]] double spectral_radius(const Eigen::MatrixXd& a, std::size_t max_iter = 200000);

using ScalarFunction = std::function<double(const Eigen::VectorXd&)>;

/// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h.
[[nodiscard]] Eigen::VectorXd finite_diff_gradient(const ScalarFunction& f, const Eigen::VectorXd& x,
                                                   double h);

/// Reproducible stream of uniforms and standard normals.
///
/// Uniforms come from the top 53 bits of mt19937_64 (fully specified by the
/// standard) mapped to the open interval (0,1); normals use the inverse CDF so
/// each variate consumes exactly one uniform.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    double uniform();
    double normal();
    /// Independent child stream for replication `index`, a pure function of (seed, index).
    [[nodiscard]] Rng child(std::uint64_t index) const;

    static std::uint64_t splitmix64(std::uint64_t x) noexcept;

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// Standard normal quantile.
[[nodiscard]] double normal_quantile(double u);

/// Runs body(i) for i in [0, count) on `threads` workers; exceptions propagate from the lowest index.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace aslg
