#pragma once

// LM specification tests and the squared-residual portmanteau test.

#include <cstddef>

#include "aslg/core.hpp"
#include "aslg/volatility.hpp"

namespace aslg {

/// How the LM information matrix is assembled.
enum class CovarianceForm {
    /// E[nu nu'] - Omega J^{-1} Omega': the variance of the score after projecting out the
    /// estimated parameters.
    Uncentered,
    /// The centered J11 / J12 blocks, term by term:
    /// J11c + Omega J^{-1} Omega' + J12 Omega' + Omega J21 with J12 = -(Omega - nubar gradbar') J^{-1}.
    Displayed,
};

[[nodiscard]] std::string to_string(CovarianceForm form);
[[nodiscard]] CovarianceForm covariance_form_from_string(const std::string& s);

struct LmOptions {
    CovarianceForm form = CovarianceForm::Uncentered;
    /// Scale of the opt-in ridge (times trace/dim) applied when the information matrix is singular;
    /// 0 raises SingularMatrix instead.
    double ridge = 0.0;
};

/// Opt-in ridge scale.
inline constexpr double kDefaultRidge = 1e-8;

/// LM test of a Log-GARCH fit against the model augmented with ell lags of eta+/eta- feedback.
/// Statistic (kappa4 - 1)^{-1} S' I^{-1} S, chi-square with 2 ell degrees of freedom.
[[nodiscard]] TestReport lm_test_aslog_vs_augmented(const FitResult& fit, const ReturnSeries& eps, std::size_t ell,
                                                    const InitPolicy& init = {}, const LmOptions& options = {});

/// LM test of an EGARCH(1,1) fit against the model augmented with q Log-GARCH lags.
/// Statistic (kappa4 - 1)^{-1} T' L^{-1} T, chi-square with 3q degrees of freedom.
[[nodiscard]] TestReport lm_test_egarch_vs_loggarch(const FitResult& fit, const ReturnSeries& eps, std::size_t q,
                                                    const InitPolicy& init = {}, const LmOptions& options = {});

/// Portmanteau test on squared-residual autocovariances up to lag m for either fitted family.
/// Statistic (n - r0) r' D^{-1} r, chi-square with m degrees of freedom.
[[nodiscard]] TestReport portmanteau_test(const FitResult& fit, const ReturnSeries& eps, std::size_t m,
                                          const InitPolicy& init = {}, double ridge = 0.0);

}  // namespace aslg
