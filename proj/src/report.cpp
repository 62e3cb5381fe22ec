#include "aslg/report.hpp"

#include "aslg/estimation.hpp"

namespace aslg {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json fit_to_json(const FitResult& fit) {
    nlohmann::json j;
    j["model"] = to_string(fit.model);
    if (fit.model == ModelKind::AsLog) j["order"] = {{"p", fit.order.p}, {"q", fit.order.q}};
    j["restrict_alpha"] = fit.restrict_alpha;
    j["n"] = fit.n;
    j["r0"] = fit.r0;
    const std::vector<std::string> names =
        fit.model == ModelKind::AsLog ? aslog_param_names(fit.order) : egarch_param_names();
    nlohmann::json params = nlohmann::json::object();
    for (std::size_t i = 0; i < names.size(); ++i) params[names[i]] = fit.params[static_cast<Eigen::Index>(i)];
    j["params"] = params;
    nlohmann::json free = nlohmann::json::object();
    nlohmann::json se = nlohmann::json::object();
    for (std::size_t i = 0; i < fit.free_names.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        free[fit.free_names[i]] = fit.free_params[k];
        se[fit.free_names[i]] = k < fit.std_errors.size() ? fit.std_errors[k] : std::nan("");
    }
    j["estimated"] = free;
    j["std_errors"] = se;
    j["loglik_per_obs"] = fit.loglik_per_obs;
    j["criterion"] = fit.criterion_value;
    j["kappa4"] = fit.kappa4_hat;
    j["converged"] = fit.converged;
    j["iterations"] = fit.iterations;
    j["warnings"] = fit.warnings;
    if (fit.model == ModelKind::Egarch) {
        j["invertibility"] = {{"mean", fit.invertibility_mean ? nlohmann::json(*fit.invertibility_mean) : nullptr},
                              {"verdict", fit.invertible ? nlohmann::json(*fit.invertible ? "invertible"
                                                                                         : "not_invertible")
                                                         : nlohmann::json("indeterminate")}};
    }
    return j;
}

nlohmann::json test_to_json(const TestReport& report, bool with_components) {
    nlohmann::json j = {{"name", to_string(report.name)},
                        {"statistic", report.statistic},
                        {"df", report.df},
                        {"p_value", report.p_value},
                        {"warnings", report.warnings}};
    if (with_components) {
        nlohmann::json c = nlohmann::json::object();
        for (const auto& [k, m] : report.components) c[k] = matrix_to_json(m);
        j["components"] = c;
    }
    return j;
}

}  // namespace aslg
