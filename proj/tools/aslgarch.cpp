// aslgarch: fit, test, simulate and compare AS-Log-GARCH and EGARCH(1,1) models from the shell.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "aslg/errors.hpp"
#include "aslg/estimation.hpp"
#include "aslg/forecast.hpp"
#include "aslg/ingest.hpp"
#include "aslg/montecarlo.hpp"
#include "aslg/report.hpp"
#include "aslg/simulate.hpp"
#include "aslg/sptests.hpp"
#include "aslg/stationarity.hpp"
#include "aslg/volatility.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace aslg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

struct DataOptions {
    std::string data;
    std::optional<std::string> fetch;
    std::string currency;
    std::string input = "returns";
    std::string start;
    std::string end;
    std::string cache_dir;
};

struct ModelOptions {
    std::string model = "aslog";
    std::size_t p = 1;
    std::size_t q = 1;
    bool restrict_alpha = false;
    std::string params;
    std::uint64_t seed = 20240601;
    std::size_t restarts = 3;
    std::size_t max_iters = 4000;
    double tol = 1e-10;
    unsigned threads = 1;
    bool ridge = false;
};

void add_data_options(CLI::App* cmd, DataOptions& d) {
    cmd->add_option("--data", d.data, "Local CSV (ECB eurofxref-hist layout, date,value, or one value per line)");
    cmd->add_option("--fetch", d.fetch, "Download the ECB history (optionally from this URL)")
        ->expected(0, 1)
        ->default_str(kEcbHistUrl);
    cmd->add_option("--currency", d.currency, "Currency column of an ECB file, e.g. USD");
    cmd->add_option("--input", d.input, "Meaning of generic CSV values")->check(CLI::IsMember({"returns", "levels"}));
    cmd->add_option("--start", d.start, "First return date kept (YYYY-MM-DD)");
    cmd->add_option("--end", d.end, "Last return date kept (YYYY-MM-DD)");
    cmd->add_option("--cache-dir", d.cache_dir, "Download cache (default $ASLG_CACHE_DIR)");
}

void add_model_options(CLI::App* cmd, ModelOptions& m) {
    cmd->add_option("--model", m.model, "Model family")->check(CLI::IsMember({"aslog", "egarch"}));
    cmd->add_option("--p", m.p, "Log-GARCH beta order");
    cmd->add_option("--q", m.q, "Log-GARCH alpha order");
    cmd->add_flag("--restrict-alpha", m.restrict_alpha, "Impose alpha_+ = alpha_-");
    cmd->add_option("--params", m.params, "Comma-separated parameters to evaluate instead of fitting");
    cmd->add_option("--seed", m.seed, "Seed for optimizer restarts");
    cmd->add_option("--restarts", m.restarts, "Simplex starts");
    cmd->add_option("--max-iters", m.max_iters, "Simplex iterations per start");
    cmd->add_option("--tol", m.tol, "Convergence tolerance");
    cmd->add_option("--threads", m.threads, "Worker threads");
    cmd->add_flag("--ridge", m.ridge, "Ridge singular information matrices instead of failing");
}

std::string read_text(const std::string& path) {
    if (!fs::exists(path)) throw IoError("no such file: " + path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << text;
}

Date parse_date_flag(const std::string& s, const char* flag) {
    const auto d = parse_iso_date(s);
    if (!d) throw InvalidArgument(std::string(flag) + ": expected YYYY-MM-DD, got '" + s + "'");
    return *d;
}

ReturnSeries load_returns(const DataOptions& d) {
    std::string body;
    if (d.fetch) {
        FetchOptions fo;
        if (!d.cache_dir.empty()) fo.cache_dir = d.cache_dir;
        body = fetch_ecb(d.fetch->empty() ? std::string(kEcbHistUrl) : *d.fetch, fo);
    } else if (!d.data.empty()) {
        body = read_text(d.data);
        if (body.rfind("PK\x03\x04", 0) == 0) body = unzip_first(body);
    } else {
        throw InvalidArgument("no input: pass --data PATH or --fetch");
    }
    ReturnSeries r({0.0});
    const bool ecb = body.find("Date,") != std::string::npos && body.rfind("Date", 0) == 0;
    if (ecb && !d.currency.empty()) {
        r = levels_to_returns(parse_ecb_hist(body, d.currency));
    } else if (ecb && d.fetch) {
        throw InvalidArgument("--currency is required with an ECB file");
    } else {
        const LevelSeries s = parse_generic_csv(body);
        if (d.input == "levels") {
            r = levels_to_returns(s);
        } else if (s.dates.empty()) {
            r = ReturnSeries(s.levels);
        } else {
            r = ReturnSeries(s.levels, s.dates);
        }
    }
    if (d.start.empty() && d.end.empty()) return r;
    if (!r.has_dates()) throw InvalidArgument("--start/--end need dated input");
    const Date lo = d.start.empty() ? Date{std::chrono::year{1}, std::chrono::month{1}, std::chrono::day{1}}
                                    : parse_date_flag(d.start, "--start");
    const Date hi = d.end.empty() ? Date{std::chrono::year{9999}, std::chrono::month{12}, std::chrono::day{31}}
                                  : parse_date_flag(d.end, "--end");
    std::size_t b = 0;
    while (b < r.size() && r.dates()[b] < lo) ++b;
    std::size_t e = b;
    while (e < r.size() && r.dates()[e] <= hi) ++e;
    if (e - b < 2) throw InvalidArgument("date window keeps fewer than two returns");
    return r.slice(b, e);
}

std::vector<double> parse_number_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw InvalidArgument("--params: bad number '" + item + "'");
        }
        while (used < item.size() && item[used] == ' ') ++used;
        if (used != item.size()) throw InvalidArgument("--params: bad number '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<std::size_t> parse_lags(const std::string& s) {
    std::vector<std::size_t> out;
    auto to_lag = [&](const std::string& t) -> std::size_t {
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(t, &used);
        } catch (const std::exception&) {
            throw InvalidArgument("--lags: bad value '" + s + "'");
        }
        if (used != t.size() || v < 1) throw InvalidArgument("--lags: bad value '" + s + "'");
        return static_cast<std::size_t>(v);
    };
    const std::size_t dots = s.find("..");
    if (dots != std::string::npos) {
        const std::size_t a = to_lag(s.substr(0, dots));
        const std::size_t b = to_lag(s.substr(dots + 2));
        if (b < a) throw InvalidArgument("--lags: empty range '" + s + "'");
        for (std::size_t l = a; l <= b; ++l) out.push_back(l);
        return out;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_lag(item));
    if (out.empty()) throw InvalidArgument("--lags: no lag given");
    return out;
}

OptimConfig optim_config(const ModelOptions& m) {
    OptimConfig c;
    c.seed = m.seed;
    c.restarts = m.restarts;
    c.max_iters = m.max_iters;
    c.tol = m.tol;
    c.threads = m.threads;
    c.ridge = m.ridge ? kDefaultRidge : 0.0;
    return c;
}

FitResult fit_model(const ModelOptions& m, const ReturnSeries& r) {
    const OptimConfig oc = optim_config(m);
    const AsLogGarchOrder order{m.p, m.q};
    if (m.model == "aslog") {
        if (!m.params.empty()) {
            const std::vector<double> v = parse_number_list(m.params);
            if (v.size() != order.dim())
                throw InvalidArgument("--params: expected " + std::to_string(order.dim()) + " values for p=" +
                                      std::to_string(m.p) + ", q=" + std::to_string(m.q));
            const AsLogGarchParams th =
                AsLogGarchParams::from_vector(order, Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()));
            return evaluate_aslog(th, r, {}, m.restrict_alpha, oc.ridge);
        }
        return qmle_aslog(r, order, oc, {}, m.restrict_alpha);
    }
    if (!m.params.empty()) {
        const std::vector<double> v = parse_number_list(m.params);
        if (v.size() != 4) throw InvalidArgument("--params: expected 4 EGARCH values (omega,gamma,delta,beta)");
        return evaluate_egarch(EgarchParams::from_vector(Eigen::Map<const Eigen::VectorXd>(v.data(), 4)), r, {},
                               oc.ridge);
    }
    return qmle_egarch11(r, oc);
}

json stationarity_json(const FitResult& fit, const ReturnSeries& r, std::uint64_t seed) {
    const AsLogGarchParams th = fit.aslog_params();
    const FilterOutput f = filter_aslog(th, r);
    std::size_t pos = 0;
    for (std::size_t t = fit.r0; t < f.residuals.size(); ++t) pos += f.residuals[t] > 0.0 ? 1 : 0;
    const double a = static_cast<double>(pos) / static_cast<double>(f.residuals.size() - fit.r0);
    json j;
    j["prob_positive"] = a;
    if (a > 0.0 && a < 1.0) {
        const LyapunovEstimate le =
            lyapunov_exponent_mc(th, a, kDefaultLyapunovHorizon, kDefaultLyapunovReps, Rng(seed));
        j["lyapunov"] = {{"gamma_hat", le.gamma_hat}, {"std_err", le.std_err}, {"verdict", to_string(le.verdict())}};
    }
    if (th.alpha_plus.size() == 1 && th.beta.size() == 1) j["closed_form"] = stationarity_pq11_closed_form(th, a);
    const MomentCheck mc = moment_matrix_check(th);
    j["moment_check"] = {{"spectral_radius", mc.spectral_radius}, {"pass", mc.pass}};
    return j;
}

std::string residuals_csv(const FitResult& fit, const ReturnSeries& r) {
    const FilterOutput f = fit.model == ModelKind::AsLog ? filter_aslog(fit.aslog_params(), r)
                                                         : filter_egarch(fit.egarch_params(), r);
    std::ostringstream os;
    os << (r.has_dates() ? "t,date,return,log_sigma2,residual\n" : "t,return,log_sigma2,residual\n");
    char buf[128];
    for (std::size_t t = 0; t < r.size(); ++t) {
        os << t << ',';
        if (r.has_dates()) os << format_iso_date(r.dates()[t]) << ',';
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r[t], f.log_sigma2[t], f.residuals[t]);
        os << buf;
    }
    return os.str();
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

// Injects "--key value" tokens from env and the JSON config ahead of the user's flags.
std::vector<std::string> expand_arguments(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::size_t sub = 0;
    while (sub < args.size() && args[sub].rfind("-", 0) == 0) ++sub;
    if (sub >= args.size()) return args;

    std::vector<std::string> injected;
    static const std::pair<const char*, const char*> env_map[] = {
        {"ASLG_SEED", "--seed"}, {"ASLG_THREADS", "--threads"}, {"ASLG_CACHE_DIR", "--cache-dir"}};
    const std::string& cmd = args[sub];
    const bool takes_cache = cmd == "fit" || cmd == "test" || cmd == "forecast-eval";
    const bool takes_threads = cmd != "nic" && cmd != "simulate";
    for (const auto& [env, flag] : env_map) {
        const char* v = std::getenv(env);
        if (!v || !*v) continue;
        if (std::string(flag) == "--cache-dir" && !takes_cache) continue;
        if (std::string(flag) == "--threads" && !takes_threads) continue;
        if (std::string(flag) == "--seed" && cmd == "nic") continue;
        injected.push_back(flag);
        injected.push_back(v);
    }

    std::optional<std::string> config;
    for (std::size_t i = sub + 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) config = args[i].substr(9);
    }
    if (config) {
        json cfg;
        try {
            cfg = json::parse(read_text(*config));
        } catch (const json::exception& e) {
            throw IoError("config " + *config + ": " + e.what());
        }
        if (!cfg.is_object()) throw IoError("config " + *config + ": expected a JSON object");
        for (const auto& [key, value] : cfg.items()) {
            const std::string flag = "--" + key;
            if (value.is_boolean()) {
                if (value.get<bool>()) injected.push_back(flag);
            } else if (value.is_string()) {
                injected.push_back(flag);
                injected.push_back(value.get<std::string>());
            } else if (value.is_number()) {
                injected.push_back(flag);
                injected.push_back(value.dump());
            } else if (value.is_array()) {
                std::string joined;
                for (const auto& x : value) joined += (joined.empty() ? "" : ",") + (x.is_string() ? x.get<std::string>() : x.dump());
                injected.push_back(flag);
                injected.push_back(joined);
            } else {
                throw IoError("config " + *config + ": unsupported value for '" + key + "'");
            }
        }
    }
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub) + 1, injected.begin(), injected.end());
    return args;
}

void print_error(const std::string& type, const std::string& message) {
    std::cerr << json{{"error", {{"type", type}, {"message", message}}}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AS-Log-GARCH and EGARCH(1,1): estimation, specification tests, Monte Carlo and forecasts"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", "aslgarch 1.0.0");
    std::string config_path;
    auto add_config = [&](CLI::App* c) { c->add_option("--config", config_path, "JSON file of default flag values"); };

    // fit
    DataOptions fit_data;
    ModelOptions fit_model_opts;
    std::string fit_output, fit_residuals;
    bool fit_no_stationarity = false;
    CLI::App* fit_cmd = app.add_subcommand("fit", "QML fit and JSON report");
    add_data_options(fit_cmd, fit_data);
    add_model_options(fit_cmd, fit_model_opts);
    add_config(fit_cmd);
    fit_cmd->add_option("--output", fit_output, "JSON report path (default stdout)");
    fit_cmd->add_option("--residuals-csv", fit_residuals, "Write returns, fitted log sigma^2 and residuals");
    fit_cmd->add_flag("--no-stationarity", fit_no_stationarity, "Skip the Log-GARCH stationarity diagnostics");

    // test
    DataOptions test_data;
    ModelOptions test_model_opts;
    std::string test_kind = "lm", test_lags = "1..12", test_output, test_cov = "uncentered";
    bool test_table = false, test_components = false;
    CLI::App* test_cmd = app.add_subcommand("test", "LM or portmanteau p-values over a range of lags");
    add_data_options(test_cmd, test_data);
    add_model_options(test_cmd, test_model_opts);
    add_config(test_cmd);
    test_cmd->add_option("--test", test_kind, "Test")->check(CLI::IsMember({"lm", "portmanteau"}));
    test_cmd->add_option("--lags", test_lags, "Lags: a..b, a comma list, or one value");
    test_cmd->add_option("--covariance", test_cov, "LM information form")
        ->check(CLI::IsMember({"uncentered", "displayed"}));
    test_cmd->add_option("--output", test_output, "JSON report path (default stdout)");
    test_cmd->add_flag("--table", test_table, "Also print an aligned text table on stderr");
    test_cmd->add_flag("--components", test_components, "Include score and information matrices");

    // montecarlo
    std::string mc_dgp = "aslog", mc_null = "aslog", mc_test = "lm", mc_lags = "1", mc_output, mc_cov = "uncentered";
    std::size_t mc_n = 4000, mc_reps = 200, mc_burn = kDefaultBurnIn, mc_restarts = 3;
    std::uint64_t mc_seed = 1;
    unsigned mc_threads = 1;
    CLI::App* mc_cmd = app.add_subcommand("montecarlo", "Rejection frequencies of a test over simulated samples");
    add_config(mc_cmd);
    mc_cmd->add_option("--dgp", mc_dgp, "Simulated family")->check(CLI::IsMember({"aslog", "egarch"}));
    mc_cmd->add_option("--null", mc_null, "Fitted family")->check(CLI::IsMember({"aslog", "egarch"}));
    mc_cmd->add_option("--test", mc_test, "Test")->check(CLI::IsMember({"lm", "portmanteau"}));
    mc_cmd->add_option("--lags", mc_lags, "Lags: a..b, a comma list, or one value");
    mc_cmd->add_option("--n", mc_n, "Sample size");
    mc_cmd->add_option("--reps", mc_reps, "Replications");
    mc_cmd->add_option("--burn", mc_burn, "Discarded simulation start");
    mc_cmd->add_option("--seed", mc_seed, "Master seed");
    mc_cmd->add_option("--threads", mc_threads, "Worker threads");
    mc_cmd->add_option("--restarts", mc_restarts, "Simplex starts per fit");
    mc_cmd->add_option("--covariance", mc_cov, "LM information form")->check(CLI::IsMember({"uncentered", "displayed"}));
    mc_cmd->add_option("--output", mc_output, "CSV path (default stdout)");

    // forecast-eval
    DataOptions fe_data;
    ModelOptions fe_model_opts;
    std::string fe_train_end, fe_model_a = "aslog", fe_model_b = "egarch", fe_output, fe_losses_csv,
                                  fe_format = "json";
    std::optional<std::size_t> fe_hac;
    CLI::App* fe_cmd = app.add_subcommand("forecast-eval", "Diebold-Mariano comparison of one-step variance forecasts");
    add_data_options(fe_cmd, fe_data);
    add_model_options(fe_cmd, fe_model_opts);
    add_config(fe_cmd);
    fe_cmd->add_option("--train-end", fe_train_end, "Training length (integer) or last training date")->required();
    fe_cmd->add_option("--model-a", fe_model_a, "Reference model")->check(CLI::IsMember({"aslog", "egarch"}));
    fe_cmd->add_option("--model-b", fe_model_b, "Model tested for lower accuracy")
        ->check(CLI::IsMember({"aslog", "egarch"}));
    fe_cmd->add_option("--hac-lag", fe_hac, "Bartlett HAC lag for the differential variance");
    fe_cmd->add_option("--format", fe_format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    fe_cmd->add_option("--output", fe_output, "Report path (default stdout)");
    fe_cmd->add_option("--losses-csv", fe_losses_csv, "Per-observation losses of both models");

    // simulate
    std::string sim_model = "aslog", sim_params, sim_output;
    std::size_t sim_n = 1000, sim_burn = kDefaultBurnIn;
    std::uint64_t sim_seed = 1;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Simulate a path with Gaussian innovations");
    add_config(sim_cmd);
    sim_cmd->add_option("--model", sim_model, "Model family")->check(CLI::IsMember({"aslog", "egarch"}));
    sim_cmd->add_option("--params", sim_params, "Comma-separated parameters (default: the simulation-study values)");
    sim_cmd->add_option("--n", sim_n, "Observations");
    sim_cmd->add_option("--burn", sim_burn, "Discarded start");
    sim_cmd->add_option("--seed", sim_seed, "Seed");
    sim_cmd->add_option("--output", sim_output, "CSV path (default stdout)");

    // nic
    std::string nic_params, nic_output;
    double nic_min = -5.0, nic_max = 5.0;
    std::size_t nic_points = 101;
    CLI::App* nic_cmd = app.add_subcommand("nic", "News impact curve of a Log-GARCH(p,1) model as CSV");
    add_config(nic_cmd);
    nic_cmd->add_option("--params", nic_params, "omega,omega_minus,alpha_plus,alpha_minus,beta...")->required();
    nic_cmd->add_option("--min", nic_min, "Grid start");
    nic_cmd->add_option("--max", nic_max, "Grid end");
    nic_cmd->add_option("--points", nic_points, "Grid points (zero is skipped)");
    nic_cmd->add_option("--output", nic_output, "CSV path (default stdout)");

    std::vector<std::string> args;
    try {
        args = expand_arguments(argc, argv);
    } catch (const Error& e) {
        print_error("IoError", e.what());
        return kExitUsage;
    }
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("UsageError", e.what());
        return kExitUsage;
    }

    try {
        if (fit_cmd->parsed()) {
            const ReturnSeries r = load_returns(fit_data);
            const FitResult fit = fit_model(fit_model_opts, r);
            json j = fit_to_json(fit);
            if (r.has_dates()) j["sample"] = {{"first", format_iso_date(r.dates().front())},
                                              {"last", format_iso_date(r.dates().back())}};
            if (fit.model == ModelKind::AsLog && !fit_no_stationarity)
                j["stationarity"] = stationarity_json(fit, r, fit_model_opts.seed);
            if (!fit_residuals.empty()) write_output(fit_residuals, residuals_csv(fit, r));
            write_output(fit_output, j.dump(2) + "\n");
        } else if (test_cmd->parsed()) {
            const ReturnSeries r = load_returns(test_data);
            const std::vector<std::size_t> lags = parse_lags(test_lags);
            const FitResult fit = fit_model(test_model_opts, r);
            LmOptions lo;
            lo.form = covariance_form_from_string(test_cov);
            lo.ridge = test_model_opts.ridge ? kDefaultRidge : 0.0;
            json rows = json::array();
            std::ostringstream table;
            table << "  lag   statistic   df     p_value\n";
            for (std::size_t lag : lags) {
                TestReport rep;
                if (test_kind == "portmanteau")
                    rep = portmanteau_test(fit, r, lag, {}, lo.ridge);
                else if (fit.model == ModelKind::AsLog)
                    rep = lm_test_aslog_vs_augmented(fit, r, lag, {}, lo);
                else
                    rep = lm_test_egarch_vs_loggarch(fit, r, lag, {}, lo);
                json jr = test_to_json(rep, test_components);
                jr["lag"] = lag;
                rows.push_back(jr);
                table << fmt("%5.0f", static_cast<double>(lag)) << fmt("%12.4f", rep.statistic)
                      << fmt("%5.0f", rep.df) << fmt("%12.4f", rep.p_value) << "\n";
            }
            json j = {{"test", test_kind},
                      {"model", to_string(fit.model)},
                      {"covariance", test_kind == "lm" ? json(test_cov) : json(nullptr)},
                      {"fit", fit_to_json(fit)},
                      {"results", rows}};
            write_output(test_output, j.dump(2) + "\n");
            if (test_table) std::cerr << table.str();
        } else if (mc_cmd->parsed()) {
            MonteCarloConfig c;
            c.dgp = model_kind_from_string(mc_dgp);
            c.null = model_kind_from_string(mc_null);
            c.tests = {mc_test_from_string(mc_test)};
            c.lags = parse_lags(mc_lags);
            c.n = mc_n;
            c.reps = mc_reps;
            c.burn = mc_burn;
            c.seed = mc_seed;
            c.threads = mc_threads;
            c.optim.restarts = mc_restarts;
            c.lm.form = covariance_form_from_string(mc_cov);
            const MonteCarloResult res = run_montecarlo(c);
            write_output(mc_output, montecarlo_csv(res));
            if (res.failures() > 0)
                std::cerr << json{{"warning", std::to_string(res.failures()) + " replications failed"},
                                  {"first_error", *std::find_if(res.errors.begin(), res.errors.end(),
                                                                [](const std::string& e) { return !e.empty(); })}}
                                 .dump()
                          << "\n";
        } else if (fe_cmd->parsed()) {
            const ReturnSeries r = load_returns(fe_data);
            std::size_t split = 0;
            if (const auto d = parse_iso_date(fe_train_end)) {
                if (!r.has_dates()) throw InvalidArgument("--train-end date needs dated input");
                while (split < r.size() && r.dates()[split] <= *d) ++split;
            } else {
                try {
                    std::size_t used = 0;
                    split = std::stoul(fe_train_end, &used);
                    if (used != fe_train_end.size()) throw std::invalid_argument("trailing");
                } catch (const std::exception&) {
                    throw InvalidArgument("--train-end: expected an integer or YYYY-MM-DD");
                }
            }
            if (split >= r.size()) throw InvalidArgument("holdout is empty: --train-end covers the whole sample");
            if (split < 50) throw InvalidArgument("training sample too short");
            const ReturnSeries train = r.slice(0, split);
            ModelOptions ma = fe_model_opts, mb = fe_model_opts;
            ma.model = fe_model_a;
            mb.model = fe_model_b;
            ma.params.clear();
            mb.params.clear();
            const FitResult fa = fit_model(ma, train);
            const FitResult fb = fit_model(mb, train);
            const std::vector<double> sa = oos_forecast(fa, r, split);
            const std::vector<double> sb = oos_forecast(fb, r, split);
            std::vector<double> eps2;
            for (std::size_t t = split; t < r.size(); ++t) eps2.push_back(r[t] * r[t]);
            const double floor = prepare_series(train.values(), {}).floor_abs;
            json rows = json::array();
            std::ostringstream csv;
            csv << "loss,statistic,p_value,mean_loss_a,mean_loss_b,error\n";
            std::ostringstream losses;
            losses << (r.has_dates() ? "date," : "t,") << "loss,loss_a,loss_b,d\n";
            bool any_failed = false;
            for (LossKind k : kAllLosses) {
                const std::vector<double> la = loss_series(eps2, sa, k, floor * floor);
                const std::vector<double> lb = loss_series(eps2, sb, k, floor * floor);
                double ma_sum = 0.0, mb_sum = 0.0;
                for (std::size_t t = 0; t < la.size(); ++t) {
                    ma_sum += la[t];
                    mb_sum += lb[t];
                    losses << (r.has_dates() ? format_iso_date(r.dates()[split + t]) : std::to_string(split + t))
                           << ',' << to_string(k) << fmt(",%.17g", la[t]) << fmt(",%.17g", lb[t])
                           << fmt(",%.17g", lb[t] - la[t]) << "\n";
                }
                const double mean_a = ma_sum / static_cast<double>(la.size());
                const double mean_b = mb_sum / static_cast<double>(lb.size());
                json row = {{"loss", to_string(k)}, {"mean_loss_a", mean_a}, {"mean_loss_b", mean_b}};
                try {
                    const DieboldMarianoResult dm = diebold_mariano(la, lb, fe_hac);
                    row["statistic"] = dm.statistic;
                    row["p_value"] = dm.p_value;
                    csv << to_string(k) << fmt(",%.10g", dm.statistic) << fmt(",%.10g", dm.p_value)
                        << fmt(",%.10g", mean_a) << fmt(",%.10g", mean_b) << ",\n";
                } catch (const InvalidArgument& e) {
                    any_failed = true;
                    row["statistic"] = nullptr;
                    row["p_value"] = nullptr;
                    row["error"] = e.what();
                    csv << to_string(k) << ",,," << fmt("%.10g", mean_a) << fmt(",%.10g", mean_b) << ",\"" << e.what()
                        << "\"\n";
                }
                rows.push_back(row);
            }
            json j = {{"model_a", fe_model_a},
                      {"model_b", fe_model_b},
                      {"n_train", split},
                      {"n_holdout", r.size() - split},
                      {"hac_lag", fe_hac ? json(*fe_hac) : json(nullptr)},
                      {"fit_a", fit_to_json(fa)},
                      {"fit_b", fit_to_json(fb)},
                      {"results", rows}};
            if (!fe_losses_csv.empty()) write_output(fe_losses_csv, losses.str());
            write_output(fe_output, fe_format == "json" ? j.dump(2) + "\n" : csv.str());
            if (any_failed) {
                print_error("DegenerateDifferential", "Diebold-Mariano failed for at least one loss");
                return kExitNumerical;
            }
        } else if (sim_cmd->parsed()) {
            SimulatedPath path{ReturnSeries({0.0}), {}, {}};
            const Rng rng(sim_seed);
            if (sim_model == "aslog") {
                AsLogGarchParams th = default_mc_theta();
                if (!sim_params.empty()) {
                    const std::vector<double> v = parse_number_list(sim_params);
                    if (v.size() < 5 || (v.size() - 1) % 4 != 0)
                        throw InvalidArgument("--params: expected 4k+1 values for Log-GARCH(k,k)");
                    const std::size_t q = (v.size() - 1) / 4;
                    th = AsLogGarchParams::from_vector({q, q}, Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()));
                }
                path = simulate_aslog(th, sim_n, sim_burn, rng);
            } else {
                EgarchParams z = default_mc_zeta();
                if (!sim_params.empty()) {
                    const std::vector<double> v = parse_number_list(sim_params);
                    if (v.size() != 4) throw InvalidArgument("--params: expected omega,gamma,delta,beta");
                    z = EgarchParams::from_vector(Eigen::Map<const Eigen::VectorXd>(v.data(), 4));
                }
                path = simulate_egarch11(z, sim_n, sim_burn, rng);
            }
            std::ostringstream os;
            os << "t,return,log_sigma2,innovation\n";
            for (std::size_t t = 0; t < path.returns.size(); ++t)
                os << t << fmt(",%.17g", path.returns[t]) << fmt(",%.17g", path.log_sigma2[t])
                   << fmt(",%.17g", path.innovations[t]) << "\n";
            write_output(sim_output, os.str());
        } else if (nic_cmd->parsed()) {
            const std::vector<double> v = parse_number_list(nic_params);
            if (v.size() < 5) throw InvalidArgument("--params: expected 3+p+1 values with q = 1");
            const AsLogGarchParams th =
                AsLogGarchParams::from_vector({v.size() - 4, 1}, Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()));
            if (nic_points < 2 || !(nic_max > nic_min)) throw InvalidArgument("grid needs --max > --min and 2+ points");
            std::vector<double> grid;
            for (std::size_t i = 0; i < nic_points; ++i) {
                const double x = nic_min + (nic_max - nic_min) * static_cast<double>(i) /
                                               static_cast<double>(nic_points - 1);
                if (x != 0.0) grid.push_back(x);
            }
            const std::vector<double> sig = news_impact_curve(th, grid);
            std::ostringstream os;
            os << "eps,sigma\n";
            for (std::size_t i = 0; i < grid.size(); ++i) os << fmt("%.17g", grid[i]) << fmt(",%.17g", sig[i]) << "\n";
            write_output(nic_output, os.str());
        }
    } catch (const InvalidArgument& e) {
        print_error("InvalidArgument", e.what());
        return kExitUsage;
    } catch (const IoError& e) {
        print_error("IoError", e.what());
        return kExitUsage;
    } catch (const FilterDivergence& e) {
        print_error("FilterDivergence", e.what());
        return kExitNumerical;
    } catch (const SingularMatrix& e) {
        print_error("SingularMatrix", e.what());
        return kExitNumerical;
    } catch (const NonConvergence& e) {
        print_error("NonConvergence", e.what());
        return kExitNumerical;
    } catch (const InvalidModel& e) {
        print_error("InvalidModel", e.what());
        return kExitNumerical;
    } catch (const Error& e) {
        print_error("Error", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        print_error("InternalError", e.what());
        return kExitNumerical;
    }
    return kExitOk;
}
