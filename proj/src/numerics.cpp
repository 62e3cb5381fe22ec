#include "aslg/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>
#include <vector>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "aslg/errors.hpp"

namespace aslg {

double chi2_sf(double x, int df) {
    if (!(x >= 0.0) || df < 1) throw InvalidArgument("chi2_sf requires x >= 0 and df >= 1");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return std::clamp(boost::math::gamma_q(0.5 * df, 0.5 * x), 0.0, 1.0);
}

double normal_sf(double x) {
    if (!std::isfinite(x)) throw InvalidArgument("normal_sf requires a finite argument");
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double kolmogorov_sf(double d, std::size_t n) {
    if (n == 0) throw InvalidArgument("kolmogorov_sf requires n >= 1");
    if (d <= 0.0) return 1.0;
    if (d >= 1.0) return 0.0;
    const double dn = static_cast<double>(n);
    const double s = d * d * dn;
    // Far tail (Marsaglia, Tsang and Wang): the exact recursion underflows and the tail is tiny.
    if (s > 7.24 || (s > 3.76 && n > 99) || n * d > 400.0)
        return std::clamp(2.0 * std::exp(-(2.000071 + 0.331 / std::sqrt(dn) + 1.409 / dn) * s), 0.0, 1.0);

    // Exact P(D_n < d) as an entry of H^n (Durbin's matrix), with decimal exponents tracked.
    const auto k = static_cast<Eigen::Index>(std::floor(dn * d)) + 1;
    const Eigen::Index m = 2 * k - 1;
    const double h = static_cast<double>(k) - dn * d;
    Eigen::MatrixXd hm = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            if (i - j + 1 >= 0) hm(i, j) = 1.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        hm(i, 0) -= std::pow(h, static_cast<double>(i + 1));
        hm(m - 1, i) -= std::pow(h, static_cast<double>(m - i));
    }
    hm(m - 1, 0) += (2 * h - 1 > 0 ? std::pow(2 * h - 1, static_cast<double>(m)) : 0.0);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            if (i - j + 1 > 0)
                for (Eigen::Index g = 1; g <= i - j + 1; ++g) hm(i, j) /= static_cast<double>(g);

    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(m, m);
    Eigen::MatrixXd base = hm;
    int e_result = 0, e_base = 0;
    auto rescale = [](Eigen::MatrixXd& a, int& e) {
        if (a.cwiseAbs().maxCoeff() > 1e140) {
            a *= 1e-140;
            e += 140;
        }
    };
    for (std::size_t p = n; p > 0; p >>= 1) {
        if (p & 1) {
            result = result * base;
            e_result += e_base;
            rescale(result, e_result);
        }
        if (p > 1) {
            base = base * base;
            e_base *= 2;
            rescale(base, e_base);
        }
    }
    double cdf = result(k - 1, k - 1);
    int e = e_result;
    for (std::size_t i = 1; i <= n; ++i) {
        cdf = cdf * static_cast<double>(i) / dn;
        if (cdf < 1e-140) {
            cdf *= 1e140;
            e -= 140;
        }
    }
    cdf *= std::pow(10.0, e);
    return std::clamp(1.0 - cdf, 0.0, 1.0);
}

double ks_statistic_uniform(std::vector<double> sample) {
    if (sample.empty()) throw InvalidArgument("KS statistic of an empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double u = std::clamp(sample[i], 0.0, 1.0);
        d = std::max({d, (i + 1) / n - u, u - i / n});
    }
    return d;
}

SpdSolution solve_spd(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double pivot_tol) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n || b.rows() != n) throw InvalidArgument("solve_spd: dimensions do not conform");
    if (n == 0) return {b, 0.0};
    if (!a.allFinite() || !b.allFinite()) throw InvalidArgument("solve_spd: non-finite input");
    const double scale = a.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < i; ++j)
            if (std::abs(a(i, j) - a(j, i)) > 1e-8 * std::max(scale, 1e-300))
                throw InvalidArgument("solve_spd: matrix is not symmetric");

    const double max_diag = a.diagonal().cwiseAbs().maxCoeff();
    const double threshold = pivot_tol * max_diag;
    // Unit lower-triangular L and diagonal D with a = L D L'.
    Eigen::MatrixXd l = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd dvec(n);
    double min_pivot = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
        double dj = a(j, j);
        for (Eigen::Index k = 0; k < j; ++k) dj -= l(j, k) * l(j, k) * dvec[k];
        min_pivot = std::min(min_pivot, dj);
        if (!(dj > threshold) || max_diag == 0.0) throw SingularMatrix("solve_spd: matrix is singular", dj);
        dvec[j] = dj;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k) * dvec[k];
            l(i, j) = s / dj;
        }
    }
    Eigen::MatrixXd x = b;
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        for (Eigen::Index i = 0; i < n; ++i) {
            double s = x(i, c);
            for (Eigen::Index k = 0; k < i; ++k) s -= l(i, k) * x(k, c);
            x(i, c) = s;
        }
        for (Eigen::Index i = 0; i < n; ++i) x(i, c) /= dvec[i];
        for (Eigen::Index i = n - 1; i >= 0; --i) {
            double s = x(i, c);
            for (Eigen::Index k = i + 1; k < n; ++k) s -= l(k, i) * x(k, c);
            x(i, c) = s;
        }
    }
    return {std::move(x), min_pivot};
}

double spectral_radius(const Eigen::MatrixXd& a, std::size_t max_iter) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n) throw InvalidArgument("spectral_radius: matrix must be square");
    if (!a.allFinite()) throw InvalidArgument("spectral_radius: non-finite entry");
    if ((a.array() < 0.0).any()) throw InvalidArgument("spectral_radius: matrix must be nonnegative");
    if (n == 0) return 0.0;

    // Nilpotent matrices annihilate the ones vector within n steps.
    Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
    for (Eigen::Index k = 0; k <= n && x.any(); ++k) {
        x = a * x;
        const double m = x.cwiseAbs().maxCoeff();
        if (m > 0.0) x /= m;
    }
    if (!x.any()) return 0.0;

    // rho(A + cI) = rho(A) + c for nonnegative A; the shift removes peripheral
    // eigenvalues of equal modulus so the iteration cannot cycle.
    const double shift = 0.1 * a.rowwise().sum().maxCoeff();
    Eigen::MatrixXd b = a;
    b.diagonal().array() += shift;

    x = Eigen::VectorXd::Ones(n);
    double r_prev = -1.0;
    int stable = 0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        const Eigen::VectorXd y = b * x;
        const double ny = y.cwiseAbs().maxCoeff();
        const double r = ny / x.cwiseAbs().maxCoeff();
        if ((x.array() > 0.0).all()) {
            const Eigen::ArrayXd ratio = y.array() / x.array();
            const double lo = ratio.minCoeff();
            const double hi = ratio.maxCoeff();
            if (hi - lo <= 1e-12 * hi) return std::max(0.0, 0.5 * (lo + hi) - shift);
        }
        if (std::abs(r - r_prev) <= 1e-15 * r) {
            if (++stable >= 5) return std::max(0.0, r - shift);
        } else {
            stable = 0;
        }
        r_prev = r;
        x = y / ny;
    }
    throw NonConvergence("spectral_radius: power iteration did not converge", max_iter);
}

Eigen::VectorXd finite_diff_gradient(const ScalarFunction& f, const Eigen::VectorXd& x, double h) {
    if (!(h > 0.0)) throw InvalidArgument("finite_diff_gradient: step must be positive");
    Eigen::VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        Eigen::VectorXd xp = x;
        Eigen::VectorXd xm = x;
        xp[i] += h;
        xm[i] -= h;
        const double fp = f(xp);
        const double fm = f(xm);
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw Error("finite_diff_gradient: non-finite probe at coordinate " + std::to_string(i));
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

std::uint64_t Rng::splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

double Rng::uniform() {
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double Rng::normal() { return normal_quantile(uniform()); }

Rng Rng::child(std::uint64_t index) const {
    return Rng(splitmix64(seed_ ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

double normal_quantile(double u) {
    if (!(u > 0.0 && u < 1.0)) throw InvalidArgument("normal_quantile requires u in (0,1)");
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t failed_index = count;
    std::exception_ptr failure;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (i < failed_index) {
                    failed_index = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(count));
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace aslg
