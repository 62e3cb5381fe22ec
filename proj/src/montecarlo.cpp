#include "aslg/montecarlo.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "aslg/errors.hpp"
#include "aslg/simulate.hpp"

namespace aslg {

std::string to_string(McTest test) { return test == McTest::Lm ? "lm" : "portmanteau"; }

McTest mc_test_from_string(const std::string& s) {
    if (s == "lm") return McTest::Lm;
    if (s == "portmanteau") return McTest::Portmanteau;
    throw InvalidArgument("unknown test '" + s + "' (expected lm or portmanteau)");
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "aslog") return ModelKind::AsLog;
    if (s == "egarch") return ModelKind::Egarch;
    throw InvalidArgument("unknown model '" + s + "' (expected aslog or egarch)");
}

AsLogGarchParams default_mc_theta() { return AsLogGarchParams::pq11(0.01, 0.02, 0.04, 0.05, 0.95); }

EgarchParams default_mc_zeta() { return {-0.15, -0.08, 0.12, 0.95}; }

void MonteCarloConfig::validate() const {
    if (tests.empty()) throw InvalidArgument("no test requested");
    if (lags.empty()) throw InvalidArgument("no lag requested");
    for (std::size_t l : lags)
        if (l < 1) throw InvalidArgument("lags must be positive");
    if (reps < 1) throw InvalidArgument("reps must be at least 1");
    if (n < 50) throw InvalidArgument("n must be at least 50");
    if (threads < 1) throw InvalidArgument("threads must be at least 1");
    theta0.validate();
    zeta0.validate();
    optim.validate();
}

std::size_t MonteCarloResult::failures() const {
    std::size_t k = 0;
    for (const auto& e : errors) k += e.empty() ? 0 : 1;
    return k;
}

std::vector<double> MonteCarloResult::valid_p_values(std::size_t test, std::size_t lag) const {
    std::vector<double> out;
    for (double p : p_values.at(test).at(lag))
        if (!std::isnan(p)) out.push_back(p);
    return out;
}

double MonteCarloResult::rejection(std::size_t test, std::size_t lag, double level) const {
    const std::vector<double> ps = valid_p_values(test, lag);
    if (ps.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::size_t k = 0;
    for (double p : ps) k += p < level ? 1 : 0;
    return static_cast<double>(k) / static_cast<double>(ps.size());
}

MonteCarloResult run_montecarlo(const MonteCarloConfig& config) {
    config.validate();
    MonteCarloResult out;
    out.config = config;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.p_values.assign(config.tests.size(),
                        std::vector<std::vector<double>>(config.lags.size(), std::vector<double>(config.reps, nan)));
    out.errors.assign(config.reps, {});
    const Rng master(config.seed);

    parallel_for(config.reps, config.threads, [&](std::size_t i) {
        const Rng stream = master.child(i);
        try {
            const SimulatedPath path = config.dgp == ModelKind::AsLog
                                           ? simulate_aslog(config.theta0, config.n, config.burn, stream)
                                           : simulate_egarch11(config.zeta0, config.n, config.burn, stream);
            OptimConfig oc = config.optim;
            oc.seed = Rng::splitmix64(stream.seed() ^ 0x5eedf17ULL);
            oc.threads = 1;
            const FitResult fit = config.null == ModelKind::AsLog ? qmle_aslog(path.returns, AsLogGarchOrder{1, 1}, oc)
                                                                  : qmle_egarch11(path.returns, oc);
            for (std::size_t k = 0; k < config.tests.size(); ++k) {
                for (std::size_t l = 0; l < config.lags.size(); ++l) {
                    const std::size_t lag = config.lags[l];
                    TestReport rep;
                    if (config.tests[k] == McTest::Portmanteau)
                        rep = portmanteau_test(fit, path.returns, lag, {}, config.lm.ridge);
                    else if (config.null == ModelKind::AsLog)
                        rep = lm_test_aslog_vs_augmented(fit, path.returns, lag, {}, config.lm);
                    else
                        rep = lm_test_egarch_vs_loggarch(fit, path.returns, lag, {}, config.lm);
                    out.p_values[k][l][i] = rep.p_value;
                }
            }
        } catch (const Error& e) {
            for (auto& per_test : out.p_values)
                for (auto& per_lag : per_test) per_lag[i] = nan;
            out.errors[i] = e.what();
        }
    });
    return out;
}

std::string montecarlo_csv(const MonteCarloResult& result) {
    const auto& c = result.config;
    std::ostringstream os;
    os << "dgp,null,test,lag,reps,failures,reject_1pct,se_1pct,reject_5pct,se_5pct,reject_10pct,se_10pct\n";
    for (std::size_t k = 0; k < c.tests.size(); ++k) {
        for (std::size_t l = 0; l < c.lags.size(); ++l) {
            const std::size_t valid = result.valid_p_values(k, l).size();
            os << to_string(c.dgp) << ',' << to_string(c.null) << ',' << to_string(c.tests[k]) << ',' << c.lags[l]
               << ',' << c.reps << ',' << c.reps - valid;
            for (double level : {0.01, 0.05, 0.10}) {
                const double f = result.rejection(k, l, level);
                const double se = valid > 0 ? std::sqrt(f * (1.0 - f) / static_cast<double>(valid)) : f;
                char buf[64];
                std::snprintf(buf, sizeof buf, ",%.4f,%.4f", f, se);
                os << buf;
            }
            os << '\n';
        }
    }
    return os.str();
}

}  // namespace aslg
