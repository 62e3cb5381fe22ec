"""Log-GARCH and EGARCH(1,1) volatility models backed by the aslg C++ library."""

from ._core import (
    AslgError,
    Fit,
    FilterDivergenceError,
    InvalidArgumentError,
    IoError,
    NonConvergenceError,
    SingularMatrixError,
    chi2_sf,
    diebold_mariano,
    evaluate_aslog,
    evaluate_egarch,
    filter_aslog,
    filter_egarch,
    fit_aslog,
    fit_egarch,
    gaussian_log_mean_exp_abs,
    levels_to_returns,
    lm_test,
    loss_series,
    lyapunov_exponent,
    news_impact_curve,
    oos_forecast,
    portmanteau_test,
    qmle_criterion,
    simulate_aslog,
    simulate_egarch,
    stationarity_closed_form,
)

__all__ = [name for name in dir() if not name.startswith("_")]
