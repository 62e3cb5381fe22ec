#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "aslg/core.hpp"
#include "aslg/numerics.hpp"
#include "aslg/stationarity.hpp"

namespace testsupport {

// Central-difference Jacobian of a vector-valued map (rows: outputs, cols: inputs).
inline Eigen::MatrixXd fd_jacobian(const std::function<std::vector<double>(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h) {
    const std::size_t m = f(x).size();
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(m), x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        Eigen::VectorXd up = x, dn = x;
        up[j] += h;
        dn[j] -= h;
        const std::vector<double> a = f(up), b = f(dn);
        for (std::size_t i = 0; i < m; ++i) jac(static_cast<Eigen::Index>(i), j) = (a[i] - b[i]) / (2 * h);
    }
    return jac;
}

// Largest |a - b| / max(1, |b|) over all entries.
inline double max_rel_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / std::max(1.0, std::abs(b(i, j))));
    return worst;
}

// Log-GARCH(1,1) parameter near the simulation-study value that passes the moment screen.
inline aslg::AsLogGarchParams random_stationary_theta(aslg::Rng& rng) {
    while (true) {
        const auto u = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
        auto th = aslg::AsLogGarchParams::pq11(u(-0.1, 0.1), u(-0.1, 0.1), u(0.0, 0.1), u(0.0, 0.1), u(0.8, 0.95));
        if (aslg::moment_matrix_check(th).pass) return th;
    }
}

inline aslg::EgarchParams random_egarch_zeta(aslg::Rng& rng) {
    const auto u = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
    const double gamma = u(-0.1, 0.1);
    return {u(-0.3, 0.1), gamma, std::abs(gamma) + u(0.02, 0.2), u(0.8, 0.97)};
}

}  // namespace testsupport
