"""Heavy-tail, long-memory and realized-volatility analysis of tick data."""

from ._tailscope import (
    GENERATOR_VERSION,
    AcfPowerLawFit,
    BarSeries,
    NormalityStats,
    StageError,
    TailFit,
    TailscopeError,
    WhitenessReport,
    acf,
    bars_from_csv,
    ccdf,
    fit_acf_powerlaw,
    fit_tail,
    generate,
    hill_estimator,
    jackknife_sigma,
    log_returns,
    normality_stats,
    price_path,
    realized_volatility,
    run_pipeline,
    set_thread_limit,
    standardize,
    whiteness_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]
