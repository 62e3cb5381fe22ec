#include "aslg/simulate.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "aslg/errors.hpp"

namespace aslg {

namespace {

double draw(Rng& rng, const InnovationSampler& sampler) { return sampler ? sampler(rng) : rng.normal(); }

void guard(double h, std::size_t t) {
    if (!std::isfinite(h) || std::abs(h) > kSimulationGuard)
        throw FilterDivergence("simulated log-volatility left the overflow guard; parameters look nonstationary", t);
}

SimulatedPath simulate_log_family(const AsLogGarchParams& th, const std::vector<double>* gamma_plus,
                                  const std::vector<double>* gamma_minus, std::size_t n, std::size_t burn, Rng& rng,
                                  const InnovationSampler& sampler) {
    if (n == 0) throw InvalidArgument("simulation length must be positive");
    const std::size_t total = n + burn;
    const std::size_t q = th.alpha_plus.size();
    std::vector<double> h(total);
    std::vector<double> eps(total);
    std::vector<double> eta(total);
    std::vector<double> log_eps2(total);
    for (std::size_t t = 0; t < total; ++t) {
        double v = th.omega;
        for (std::size_t i = 0; i < q && i < t; ++i) {
            const std::size_t s = t - i - 1;
            if (eps[s] < 0.0)
                v += th.omega_minus[i] + th.alpha_minus[i] * log_eps2[s];
            else
                v += th.alpha_plus[i] * log_eps2[s];
        }
        for (std::size_t j = 0; j < th.beta.size() && j < t; ++j) v += th.beta[j] * h[t - j - 1];
        if (gamma_plus != nullptr) {
            for (std::size_t k = 0; k < gamma_plus->size() && k < t; ++k) {
                const std::size_t s = t - k - 1;
                v += ((*gamma_plus)[k] * std::max(eps[s], 0.0) + (*gamma_minus)[k] * std::max(-eps[s], 0.0)) *
                     std::exp(-0.5 * h[s]);
            }
        }
        guard(v, t);
        h[t] = v;
        eta[t] = draw(rng, sampler);
        eps[t] = std::exp(0.5 * v) * eta[t];
        log_eps2[t] = eps[t] != 0.0 ? std::log(eps[t] * eps[t]) : std::log(std::numeric_limits<double>::min());
    }
    const auto first = static_cast<std::ptrdiff_t>(burn);
    return SimulatedPath{ReturnSeries(std::vector<double>(eps.begin() + first, eps.end())),
                         std::vector<double>(h.begin() + first, h.end()),
                         std::vector<double>(eta.begin() + first, eta.end())};
}

}  // namespace

SimulatedPath simulate_aslog(const AsLogGarchParams& theta, std::size_t n, std::size_t burn, Rng rng,
                             const InnovationSampler& sampler) {
    theta.validate();
    return simulate_log_family(theta, nullptr, nullptr, n, burn, rng, sampler);
}

SimulatedPath simulate_augmented(const AugmentedLogGarchParams& vartheta, std::size_t n, std::size_t burn, Rng rng,
                                 const InnovationSampler& sampler) {
    vartheta.validate();
    return simulate_log_family(vartheta.theta, &vartheta.gamma_plus, &vartheta.gamma_minus, n, burn, rng, sampler);
}

SimulatedPath simulate_egarch11(const EgarchParams& zeta, std::size_t n, std::size_t burn, Rng rng,
                                const InnovationSampler& sampler) {
    zeta.validate();
    if (n == 0) throw InvalidArgument("simulation length must be positive");
    const std::size_t total = n + burn;
    std::vector<double> h(total);
    std::vector<double> eps(total);
    std::vector<double> eta(total);
    double v = zeta.omega / (1.0 - zeta.beta);
    for (std::size_t t = 0; t < total; ++t) {
        if (t > 0) v = zeta.omega + zeta.gamma * eta[t - 1] + zeta.delta * std::abs(eta[t - 1]) + zeta.beta * h[t - 1];
        guard(v, t);
        h[t] = v;
        eta[t] = draw(rng, sampler);
        eps[t] = std::exp(0.5 * v) * eta[t];
    }
    const auto first = static_cast<std::ptrdiff_t>(burn);
    return SimulatedPath{ReturnSeries(std::vector<double>(eps.begin() + first, eps.end())),
                         std::vector<double>(h.begin() + first, h.end()),
                         std::vector<double>(eta.begin() + first, eta.end())};
}

double gaussian_log_mean_exp_abs() {
    // E exp|Z| = 2 exp(1/2) Phi(1)
    const double phi1 = 0.5 * std::erfc(-1.0 / std::numbers::sqrt2);
    return std::log(2.0 * std::exp(0.5) * phi1);
}

LogGarchConversion egarch_to_loggarch_symmetric(const EgarchParams& zeta, std::span<const double> eta_tilde,
                                                std::optional<double> log_mean_exp_abs) {
    zeta.validate();
    if (zeta.gamma != 0.0)
        throw InvalidArgument("only the symmetric case (gamma = 0, equal responses to both signs) is supported");
    if (zeta.delta == 0.0) throw InvalidArgument("the construction requires a nonzero symmetric coefficient");
    double lm = 0.0;
    if (log_mean_exp_abs) {
        lm = *log_mean_exp_abs;
    } else {
        if (eta_tilde.empty()) throw InvalidArgument("cannot estimate E exp|eta| from an empty sample");
        double s = 0.0;
        for (double x : eta_tilde) s += std::exp(std::abs(x));
        lm = std::log(s / static_cast<double>(eta_tilde.size()));
    }
    if (!std::isfinite(lm)) throw InvalidArgument("log E exp|eta| must be finite");
    const double a = zeta.delta;
    LogGarchConversion out;
    out.theta = AsLogGarchParams::pq11(zeta.omega + a * lm, 0.0, a, a, zeta.beta - a);
    out.log_mean_exp_abs = lm;
    out.eta.reserve(eta_tilde.size());
    const double norm = std::exp(-0.5 * lm);
    for (double x : eta_tilde) {
        const double sign = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
        out.eta.push_back(std::exp(0.5 * std::abs(x)) * sign * norm);
    }
    return out;
}

}  // namespace aslg
