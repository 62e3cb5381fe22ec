#pragma once

// Domain types shared by the volatility, estimation and testing modules.

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace aslg {

using Date = std::chrono::year_month_day;

/// Ordered observations (percent log-returns) with optional calendar dates.
class ReturnSeries {
public:
    explicit ReturnSeries(std::vector<double> values);
    ReturnSeries(std::vector<double> values, std::vector<Date> dates);

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t t) const { return values_[t]; }
    [[nodiscard]] bool has_dates() const noexcept { return !dates_.empty(); }
    [[nodiscard]] const std::vector<Date>& dates() const noexcept { return dates_; }

    /// Observations [begin, end) as a new series.
    [[nodiscard]] ReturnSeries slice(std::size_t begin, std::size_t end) const;
    /// Every value multiplied by c.
    [[nodiscard]] ReturnSeries scaled(double c) const;

private:
    std::vector<double> values_;
    std::vector<Date> dates_;
};

struct AsLogGarchOrder {
    std::size_t p = 1;
    std::size_t q = 1;

    /// Number of parameters 3q + p + 1.
    [[nodiscard]] std::size_t dim() const noexcept { return 3 * q + p + 1; }
    void validate() const;
    friend bool operator==(const AsLogGarchOrder&, const AsLogGarchOrder&) = default;
};

/// theta = (omega, omega_minus', alpha_plus', alpha_minus', beta')'.
struct AsLogGarchParams {
    double omega = 0.0;
    std::vector<double> omega_minus;
    std::vector<double> alpha_plus;
    std::vector<double> alpha_minus;
    std::vector<double> beta;

    [[nodiscard]] AsLogGarchOrder order() const noexcept { return {beta.size(), alpha_plus.size()}; }
    /// Throws InvalidArgument on inconsistent lengths or non-finite entries.
    void validate() const;
    [[nodiscard]] Eigen::VectorXd to_vector() const;
    static AsLogGarchParams from_vector(const AsLogGarchOrder& order, const Eigen::VectorXd& v);
    /// p = q = 1 convenience constructor.
    static AsLogGarchParams pq11(double omega, double omega_minus, double alpha_plus, double alpha_minus,
                                 double beta);
    [[nodiscard]] bool symmetric() const noexcept { return alpha_plus == alpha_minus; }
};

/// EGARCH(1,1) parameter zeta = (omega, gamma, delta, beta)'.
struct EgarchParams {
    double omega = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    double beta = 0.0;

    /// Admissible set: delta >= |gamma| and |beta| < 1.
    void validate() const;
    [[nodiscard]] Eigen::VectorXd to_vector() const;
    static EgarchParams from_vector(const Eigen::VectorXd& v);
};

/// Log-GARCH with EGARCH-type feedback of past standardized returns.
struct AugmentedLogGarchParams {
    AsLogGarchParams theta;
    std::vector<double> gamma_plus;
    std::vector<double> gamma_minus;

    [[nodiscard]] std::size_t ell() const noexcept { return gamma_plus.size(); }
    void validate() const;
};

/// EGARCH(1,1) extended with Log-GARCH regressors, alpha = (omega_minus', alpha_plus', alpha_minus')'.
struct AugmentedEgarchParams {
    EgarchParams zeta;
    std::vector<double> omega_minus;
    std::vector<double> alpha_plus;
    std::vector<double> alpha_minus;

    [[nodiscard]] std::size_t q() const noexcept { return alpha_plus.size(); }
    void validate() const;
};

struct FilterOutput {
    std::vector<double> log_sigma2;
    std::vector<double> residuals;
    /// Leading observations excluded from criteria (zero-based indices < r0).
    std::size_t r0 = 0;
    /// Count of returns replaced by the zero-return floor before taking logs.
    std::size_t floored = 0;
};

enum class ModelKind { AsLog, Egarch };

[[nodiscard]] std::string to_string(ModelKind kind);

/// Result of a QML fit. Matrices and standard errors refer to the free parameters.
struct FitResult {
    ModelKind model = ModelKind::AsLog;
    AsLogGarchOrder order;
    bool restrict_alpha = false;
    /// Full model parameter (theta of length 3q+p+1, or zeta of length 4).
    Eigen::VectorXd params;
    /// params = free_map * free parameters.
    Eigen::MatrixXd free_map;
    std::vector<std::string> free_names;
    Eigen::VectorXd free_params;
    std::size_t n = 0;
    std::size_t r0 = 0;
    double loglik_per_obs = 0.0;
    double kappa4_hat = 0.0;
    Eigen::MatrixXd j_hat;
    Eigen::MatrixXd cov;
    Eigen::VectorXd std_errors;
    bool converged = false;
    std::size_t iterations = 0;
    double criterion_value = 0.0;
    std::vector<std::string> warnings;
    /// EGARCH only: empirical invertibility expectation at the estimate and its verdict.
    std::optional<double> invertibility_mean;
    std::optional<bool> invertible;

    [[nodiscard]] AsLogGarchParams aslog_params() const;
    [[nodiscard]] EgarchParams egarch_params() const;
};

enum class TestKind { LmAsLog, LmEgarch, PortmanteauAsLog, PortmanteauEgarch };

[[nodiscard]] std::string to_string(TestKind kind);

struct TestReport {
    TestKind name = TestKind::LmAsLog;
    double statistic = 0.0;
    int df = 1;
    double p_value = 1.0;
    std::map<std::string, Eigen::MatrixXd> components;
    std::vector<std::string> warnings;
};

/// Reparameterization under which log sigma_t^2 of c*eps equals log c^2 plus log sigma_t^2 of eps.
[[nodiscard]] AsLogGarchParams transport_params_under_scaling(const AsLogGarchParams& theta, double c);

/// Parameter names in vector order, e.g. omega, omega_minus1, alpha_plus1, alpha_minus1, beta1.
[[nodiscard]] std::vector<std::string> aslog_param_names(const AsLogGarchOrder& order);
[[nodiscard]] std::vector<std::string> egarch_param_names();

/// ISO date helpers ("YYYY-MM-DD").
[[nodiscard]] std::optional<Date> parse_iso_date(std::string_view text);
[[nodiscard]] std::string format_iso_date(const Date& d);

}  // namespace aslg
