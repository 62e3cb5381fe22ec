#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "aslg/errors.hpp"
#include "aslg/estimation.hpp"
#include "aslg/forecast.hpp"
#include "aslg/ingest.hpp"
#include "aslg/report.hpp"
#include "aslg/simulate.hpp"
#include "aslg/sptests.hpp"
#include "aslg/stationarity.hpp"
#include "aslg/volatility.hpp"

namespace py = pybind11;
using namespace aslg;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

ReturnSeries series(const std::vector<double>& v) { return ReturnSeries(v); }

// Round-trips through JSON so Python receives plain dicts and lists.
py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

AsLogGarchParams aslog_from(const std::vector<double>& v) {
    if (v.size() < 5 || (v.size() - 1) % 4 != 0)
        throw InvalidArgument("Log-GARCH parameter vector must have length 3q + p + 1 with p = q");
    const std::size_t q = (v.size() - 1) / 4;
    return AsLogGarchParams::from_vector({q, q}, Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
}

EgarchParams egarch_from(const std::vector<double>& v) {
    if (v.size() != 4) throw InvalidArgument("EGARCH parameter vector must have length 4");
    return {v[0], v[1], v[2], v[3]};
}

py::dict path_dict(const SimulatedPath& p) {
    py::dict d;
    d["returns"] = to_array({p.returns.values().begin(), p.returns.values().end()});
    d["log_sigma2"] = to_array(p.log_sigma2);
    d["innovations"] = to_array(p.innovations);
    return d;
}

OptimConfig optim(std::uint64_t seed, std::size_t restarts, unsigned threads) {
    OptimConfig c;
    c.seed = seed;
    c.restarts = restarts;
    c.threads = threads;
    return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Log-GARCH and EGARCH(1,1): simulation, QML fits, specification tests and forecasts.";

    auto base = py::register_exception<Error>(m, "AslgError", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgumentError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", base.ptr());
    py::register_exception<SingularMatrix>(m, "SingularMatrixError", base.ptr());
    py::register_exception<FilterDivergence>(m, "FilterDivergenceError", base.ptr());
    py::register_exception<NonConvergence>(m, "NonConvergenceError", base.ptr());

    py::class_<FitResult>(m, "Fit")
        .def_property_readonly("model", [](const FitResult& f) { return to_string(f.model); })
        .def_readonly("params", &FitResult::params)
        .def_readonly("free_params", &FitResult::free_params)
        .def_readonly("free_names", &FitResult::free_names)
        .def_readonly("std_errors", &FitResult::std_errors)
        .def_readonly("cov", &FitResult::cov)
        .def_readonly("j_hat", &FitResult::j_hat)
        .def_readonly("loglik_per_obs", &FitResult::loglik_per_obs)
        .def_readonly("criterion", &FitResult::criterion_value)
        .def_readonly("kappa4", &FitResult::kappa4_hat)
        .def_readonly("converged", &FitResult::converged)
        .def_readonly("n", &FitResult::n)
        .def_readonly("r0", &FitResult::r0)
        .def_readonly("warnings", &FitResult::warnings)
        .def("to_dict", [](const FitResult& f) { return to_python(fit_to_json(f)); })
        .def("__repr__", [](const FitResult& f) {
            return "<Fit " + to_string(f.model) + " n=" + std::to_string(f.n) +
                   (f.converged ? " converged>" : " not converged>");
        });

    m.def(
        "simulate_aslog",
        [](const std::vector<double>& theta, std::size_t n, std::size_t burn, std::uint64_t seed) {
            return path_dict(simulate_aslog(aslog_from(theta), n, burn, Rng(seed)));
        },
        py::arg("theta"), py::arg("n"), py::arg("burn") = kDefaultBurnIn, py::arg("seed") = 1);
    m.def(
        "simulate_egarch",
        [](const std::vector<double>& zeta, std::size_t n, std::size_t burn, std::uint64_t seed) {
            return path_dict(simulate_egarch11(egarch_from(zeta), n, burn, Rng(seed)));
        },
        py::arg("zeta"), py::arg("n"), py::arg("burn") = kDefaultBurnIn, py::arg("seed") = 1);

    m.def(
        "filter_aslog",
        [](const std::vector<double>& theta, const std::vector<double>& eps) {
            return to_array(filter_aslog(aslog_from(theta), series(eps)).log_sigma2);
        },
        py::arg("theta"), py::arg("returns"));
    m.def(
        "filter_egarch",
        [](const std::vector<double>& zeta, const std::vector<double>& eps) {
            return to_array(filter_egarch(egarch_from(zeta), series(eps)).log_sigma2);
        },
        py::arg("zeta"), py::arg("returns"));
    m.def(
        "news_impact_curve",
        [](const std::vector<double>& theta, const std::vector<double>& grid) {
            return to_array(news_impact_curve(aslog_from(theta), grid));
        },
        py::arg("theta"), py::arg("grid"));

    m.def(
        "fit_aslog",
        [](const std::vector<double>& eps, std::size_t p, std::size_t q, bool restrict_alpha, std::uint64_t seed,
           std::size_t restarts, unsigned threads) {
            py::gil_scoped_release nogil;
            return qmle_aslog(series(eps), {p, q}, optim(seed, restarts, threads), {}, restrict_alpha);
        },
        py::arg("returns"), py::arg("p") = 1, py::arg("q") = 1, py::arg("restrict_alpha") = false,
        py::arg("seed") = OptimConfig{}.seed, py::arg("restarts") = OptimConfig{}.restarts, py::arg("threads") = 1);
    m.def(
        "fit_egarch",
        [](const std::vector<double>& eps, std::uint64_t seed, std::size_t restarts, unsigned threads) {
            py::gil_scoped_release nogil;
            return qmle_egarch11(series(eps), optim(seed, restarts, threads));
        },
        py::arg("returns"), py::arg("seed") = OptimConfig{}.seed, py::arg("restarts") = OptimConfig{}.restarts,
        py::arg("threads") = 1);
    m.def(
        "evaluate_aslog",
        [](const std::vector<double>& theta, const std::vector<double>& eps) {
            return evaluate_aslog(aslog_from(theta), series(eps));
        },
        py::arg("theta"), py::arg("returns"));
    m.def(
        "evaluate_egarch",
        [](const std::vector<double>& zeta, const std::vector<double>& eps) {
            return evaluate_egarch(egarch_from(zeta), series(eps));
        },
        py::arg("zeta"), py::arg("returns"));
    m.def(
        "qmle_criterion",
        [](const std::vector<double>& theta, const std::vector<double>& eps) {
            return qmle_criterion(aslog_from(theta), series(eps));
        },
        py::arg("theta"), py::arg("returns"));

    m.def(
        "lm_test",
        [](const FitResult& fit, const std::vector<double>& eps, std::size_t lags, const std::string& covariance,
           double ridge, bool components) {
            LmOptions opt;
            opt.form = covariance_form_from_string(covariance);
            opt.ridge = ridge;
            const TestReport r = fit.model == ModelKind::AsLog
                                     ? lm_test_aslog_vs_augmented(fit, series(eps), lags, {}, opt)
                                     : lm_test_egarch_vs_loggarch(fit, series(eps), lags, {}, opt);
            return to_python(test_to_json(r, components));
        },
        py::arg("fit"), py::arg("returns"), py::arg("lags") = 1, py::arg("covariance") = "uncentered",
        py::arg("ridge") = 0.0, py::arg("components") = false);
    m.def(
        "portmanteau_test",
        [](const FitResult& fit, const std::vector<double>& eps, std::size_t m, double ridge, bool components) {
            return to_python(test_to_json(portmanteau_test(fit, series(eps), m, {}, ridge), components));
        },
        py::arg("fit"), py::arg("returns"), py::arg("m") = 1, py::arg("ridge") = 0.0, py::arg("components") = false);

    m.def(
        "lyapunov_exponent",
        [](const std::vector<double>& theta, double prob_positive, std::size_t horizon, std::size_t reps,
           std::uint64_t seed) {
            const LyapunovEstimate e = lyapunov_exponent_mc(aslog_from(theta), prob_positive, horizon, reps, Rng(seed));
            py::dict d;
            d["gamma_hat"] = e.gamma_hat;
            d["std_err"] = e.std_err;
            d["verdict"] = to_string(e.verdict());
            return d;
        },
        py::arg("theta"), py::arg("prob_positive") = 0.5, py::arg("horizon") = kDefaultLyapunovHorizon,
        py::arg("reps") = kDefaultLyapunovReps, py::arg("seed") = 1);
    m.def(
        "stationarity_closed_form",
        [](const std::vector<double>& theta, double a) { return stationarity_pq11_closed_form(aslog_from(theta), a); },
        py::arg("theta"), py::arg("prob_positive") = 0.5);
    m.def("gaussian_log_mean_exp_abs", &gaussian_log_mean_exp_abs);

    m.def(
        "oos_forecast",
        [](const FitResult& fit, const std::vector<double>& eps, std::size_t split) {
            return to_array(oos_forecast(fit, series(eps), split));
        },
        py::arg("fit"), py::arg("returns"), py::arg("split"));
    m.def(
        "loss_series",
        [](const std::vector<double>& eps2, const std::vector<double>& sigma2, const std::string& kind, double floor) {
            return to_array(loss_series(eps2, sigma2, loss_kind_from_string(kind), floor));
        },
        py::arg("eps2"), py::arg("sigma2"), py::arg("kind"), py::arg("eps2_floor") = 0.0);
    m.def(
        "diebold_mariano",
        [](const std::vector<double>& a, const std::vector<double>& b, std::optional<std::size_t> hac_lag) {
            const DieboldMarianoResult r = diebold_mariano(a, b, hac_lag);
            py::dict d;
            d["statistic"] = r.statistic;
            d["p_value"] = r.p_value;
            d["mean_differential"] = r.mean_differential;
            d["n"] = r.n;
            return d;
        },
        py::arg("loss_a"), py::arg("loss_b"), py::arg("hac_lag") = py::none());

    m.def(
        "levels_to_returns", [](const std::vector<double>& levels) {
            const ReturnSeries r = levels_to_returns(std::span<const double>(levels));
            return to_array({r.values().begin(), r.values().end()});
        },
        py::arg("levels"));
    m.def("chi2_sf", &chi2_sf, py::arg("x"), py::arg("df"));
}
