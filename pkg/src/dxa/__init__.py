"""Detrended cross-correlation analysis of non-stationary time series."""

__version__ = "0.1.0"

from .core import (
    Profile,
    StationaryMoments,
    TimeSeries,
    abs_values,
    apply_chain,
    build_profile,
    diff,
    integrated_profile,
    log_diff,
    moments,
)
from .errors import DegenerateInput, DxaError, InvalidInput, InvalidParameter, IoError, ParseError
from .fluctuation import (
    CurveKind,
    FluctuationCurve,
    ScaleGrid,
    default_grid,
    detrended_covariance_at_scale,
    dfa_curve,
    dxa_curve,
    local_trend_fit,
    scale_grid,
)
from .longmem import ArfimaSpec, CouplingMode, arfima_generate, arfima_weights, generate_pair
from .scaling import (
    CorrelationFunction,
    CorrelationKind,
    Diagnosis,
    PowerLawFit,
    autocorrelation,
    cross_correlation,
    cross_correlation_diagnosis,
    fit_power_law,
    lambda_from_gamma,
    walk_covariance_rhs,
)

__all__ = [
    "ArfimaSpec",
    "CorrelationFunction",
    "CorrelationKind",
    "CouplingMode",
    "CurveKind",
    "DegenerateInput",
    "Diagnosis",
    "DxaError",
    "FluctuationCurve",
    "InvalidInput",
    "InvalidParameter",
    "IoError",
    "ParseError",
    "PowerLawFit",
    "Profile",
    "ScaleGrid",
    "StationaryMoments",
    "TimeSeries",
    "abs_values",
    "apply_chain",
    "arfima_generate",
    "arfima_weights",
    "autocorrelation",
    "build_profile",
    "cross_correlation",
    "cross_correlation_diagnosis",
    "default_grid",
    "detrended_covariance_at_scale",
    "dfa_curve",
    "diff",
    "dxa_curve",
    "fit_power_law",
    "generate_pair",
    "integrated_profile",
    "lambda_from_gamma",
    "local_trend_fit",
    "log_diff",
    "moments",
    "scale_grid",
    "walk_covariance_rhs",
]
