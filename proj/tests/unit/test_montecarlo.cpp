#include <doctest.h>

#include <cmath>
#include <string>

#include "aslg/errors.hpp"
#include "aslg/montecarlo.hpp"

using namespace aslg;

namespace {

MonteCarloConfig small_config() {
    MonteCarloConfig c;
    c.n = 400;
    c.reps = 4;
    c.burn = 200;
    c.seed = 5;
    c.tests = {McTest::Lm, McTest::Portmanteau};
    c.lags = {1, 2};
    c.optim.restarts = 1;
    return c;
}

}  // namespace

TEST_CASE("Monte Carlo results do not depend on the worker count") {
    MonteCarloConfig one = small_config();
    MonteCarloConfig three = small_config();
    three.threads = 3;
    const MonteCarloResult a = run_montecarlo(one);
    const MonteCarloResult b = run_montecarlo(three);
    REQUIRE(a.p_values.size() == 2);
    REQUIRE(a.p_values[0].size() == 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t r = 0; r < 4; ++r) {
                const double x = a.p_values[i][j][r], y = b.p_values[i][j][r];
                CHECK(((std::isnan(x) && std::isnan(y)) || x == y));
            }
}

TEST_CASE("single replication gives rejection frequencies of 0 or 1") {
    MonteCarloConfig c = small_config();
    c.reps = 1;
    c.dgp = ModelKind::Egarch;
    c.null = ModelKind::Egarch;
    c.tests = {McTest::Lm};
    c.lags = {1};
    const MonteCarloResult r = run_montecarlo(c);
    for (double level : {0.01, 0.05, 0.10}) {
        const double f = r.rejection(0, 0, level);
        CHECK((f == 0.0 || f == 1.0));
    }
    const std::string csv = montecarlo_csv(r);
    CHECK(csv.rfind("dgp,null,test,lag,reps,failures,reject_1pct,se_1pct,reject_5pct,se_5pct,reject_10pct,se_10pct", 0) == 0);
    CHECK(csv.find("egarch,egarch,lm,1,1,") != std::string::npos);
}

TEST_CASE("configuration checks") {
    MonteCarloConfig c = small_config();
    c.reps = 0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = small_config();
    c.lags = {};
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    CHECK(mc_test_from_string("portmanteau") == McTest::Portmanteau);
    CHECK(model_kind_from_string("egarch") == ModelKind::Egarch);
    CHECK_THROWS_AS((void)model_kind_from_string("garch"), InvalidArgument);
}
