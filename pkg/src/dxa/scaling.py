"""Correlation estimators, power-law fitting and the cross-correlation diagnosis."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .core import _as_series, moments
from .errors import DegenerateInput, InvalidInput, InvalidParameter
from .fluctuation import CurveKind, FluctuationCurve


class CorrelationKind(enum.Enum):
    AUTO = "auto"
    CROSS = "cross"


@dataclass(frozen=True)
class CorrelationFunction:
    """Normalized correlation at lags ``0..max_lag``.

    ``scale`` is the normalizing product (sigma^2 or sigma*sigma'); multiplying
    ``values`` by it gives the covariance at each lag.
    """

    lags: np.ndarray
    values: np.ndarray
    kind: CorrelationKind
    scale: float = 1.0

    def __post_init__(self):
        lags = np.asarray(self.lags, dtype=np.int64)
        values = np.asarray(self.values, dtype=np.float64)
        if lags.shape != values.shape or lags.ndim != 1:
            raise InvalidInput("lags and values must be 1-D and of equal length")
        if np.any(lags < 0):
            raise InvalidInput("lags must be non-negative")
        object.__setattr__(self, "lags", lags)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "kind", CorrelationKind(self.kind))

    @property
    def covariance(self) -> np.ndarray:
        return self.values * self.scale


@dataclass(frozen=True)
class PowerLawFit:
    """Log-log OLS fit ``value ~ amplitude * n**exponent`` over ``fit_range``.

    ``negative_fraction`` is the share of points in range whose sign was
    negative (for correlation functions: non-positive, and those points are
    left out of the regression; ``excluded`` counts them).
    """

    exponent: float
    amplitude: float
    fit_range: tuple[int, int]
    stderr: float
    r_squared: float
    negative_fraction: float
    points: int
    excluded: int = 0

    def as_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "amplitude": self.amplitude,
            "stderr": self.stderr,
            "r_squared": self.r_squared,
            "range": [int(self.fit_range[0]), int(self.fit_range[1])],
            "negative_fraction": self.negative_fraction,
        }


def _correlate(xa: np.ndarray, xb: np.ndarray, max_lag: int) -> np.ndarray:
    """sum_k xa[k] * xb[k + n] / N for n = 0..max_lag, via zero-padded FFT."""
    n = xa.size
    size = 1 << (2 * n - 1).bit_length()
    fa = np.fft.rfft(xa, size)
    fb = np.fft.rfft(xb, size)
    raw = np.fft.irfft(np.conj(fa) * fb, size)[: max_lag + 1]
    return raw / n


def _check_lag(max_lag: int, length: int) -> int:
    max_lag = int(max_lag)
    if not 0 <= max_lag < length:
        raise InvalidParameter(f"max_lag must lie in [0, {length - 1}], got {max_lag}")
    return max_lag


def cross_correlation(series_a, series_b, max_lag: int) -> CorrelationFunction:
    """Biased (1/N) normalized cross-correlation of B lagged behind A.

    ``X(n) = mean_k (y_k - mu)(y'_{k+n} - mu') / (sigma sigma')``.
    """
    a, b = _as_series(series_a), _as_series(series_b)
    if len(a) != len(b):
        raise InvalidInput(f"series lengths differ: {len(a)} vs {len(b)}")
    max_lag = _check_lag(max_lag, len(a))
    ma, mb = moments(a), moments(b)
    if ma.variance == 0 or mb.variance == 0:
        raise DegenerateInput("correlation undefined for a constant series")
    same = b is a or np.array_equal(a.samples, b.samples)
    xa = a.samples - ma.mean
    xb = xa if same else b.samples - mb.mean
    scale = math.sqrt(ma.variance * mb.variance)
    values = _correlate(xa, xb, max_lag) / scale
    if same:
        values[0] = 1.0
    return CorrelationFunction(np.arange(max_lag + 1), values, CorrelationKind.CROSS, scale)


def autocorrelation(series, max_lag: int) -> CorrelationFunction:
    """Biased (1/N) autocorrelation normalized so lag 0 is exactly 1."""
    s = _as_series(series)
    cf = cross_correlation(s, s, max_lag)
    return CorrelationFunction(cf.lags, cf.values, CorrelationKind.AUTO, cf.scale)


def walk_covariance_rhs(x: CorrelationFunction, n: int) -> float:
    """``n X(0) + 2 sum_{k=1}^{n-1} (n - k) X(k)`` with ``X`` in covariance units.

    This is the covariance of the two walks ``R_n`` and ``R'_n`` when the
    cross-covariance is symmetric in the lag.
    """
    n = int(n)
    if n < 1:
        raise InvalidParameter(f"n must be >= 1, got {n}")
    cov = x.covariance
    lookup = dict(zip(x.lags.tolist(), cov.tolist()))
    missing = [k for k in range(n) if k not in lookup]
    if missing:
        raise InvalidInput(f"correlation function lacks lags {missing[:5]}{'...' if len(missing) > 5 else ''}")
    terms = [n * lookup[0]] + [2.0 * (n - k) * lookup[k] for k in range(1, n)]
    return math.fsum(terms)


def lambda_from_gamma(gamma_cross: float) -> float:
    """Covariance exponent from the cross-correlation decay exponent."""
    g = float(gamma_cross)
    if not 0.0 < g <= 1.0:
        raise InvalidParameter(f"gamma_cross must lie in (0, 1], got {g}")
    return 1.0 - 0.5 * g


def _loglog_fit(n: np.ndarray, v: np.ndarray):
    lx, ly = np.log(n), np.log(v)
    res = stats.linregress(lx, ly)
    r2 = min(max(float(res.rvalue) ** 2, 0.0), 1.0)
    return float(res.slope), float(math.exp(res.intercept)), float(res.stderr), r2


def fit_power_law(curve, n_lo: int | None = None, n_hi: int | None = None) -> PowerLawFit:
    """OLS slope of log|value| on log n between ``n_lo`` and ``n_hi`` inclusive.

    Fluctuation curves are fitted on ``|f_signed|``; a zero in range is an
    error.  Correlation functions are fitted on their positive values only.
    """
    if isinstance(curve, FluctuationCurve):
        n = curve.scales.scales.astype(np.float64)
        raw = curve.f_signed
    elif isinstance(curve, CorrelationFunction):
        n = curve.lags.astype(np.float64)
        raw = curve.values
    else:
        raise InvalidInput(f"cannot fit a {type(curve).__name__}")
    lo = n[0] if n_lo is None else n_lo
    hi = n[-1] if n_hi is None else n_hi
    if lo >= hi:
        raise InvalidInput(f"fit range [{lo}, {hi}] is empty")
    sel = (n >= lo) & (n <= hi)
    if isinstance(curve, CorrelationFunction):
        sel &= n > 0
    n, raw = n[sel], raw[sel]
    if n.size < 3:
        raise InvalidInput(f"need at least 3 points in [{lo}, {hi}], found {n.size}")
    excluded = 0
    if isinstance(curve, FluctuationCurve):
        if np.any(raw == 0):
            raise DegenerateInput("zero fluctuation value inside the fit range")
        negative = float(np.mean(raw < 0))
        value = np.abs(raw)
    else:
        keep = raw > 0
        negative = float(np.mean(~keep))
        excluded = int(np.count_nonzero(~keep))
        n, value = n[keep], raw[keep]
        if n.size < 3:
            raise DegenerateInput(f"only {n.size} positive correlation values in range")
    slope, amp, se, r2 = _loglog_fit(n, value)
    return PowerLawFit(
        exponent=slope,
        amplitude=amp,
        fit_range=(int(n[0]), int(n[-1])),
        stderr=se,
        r_squared=r2,
        negative_fraction=negative,
        points=int(n.size),
        excluded=excluded,
    )


class Diagnosis(enum.Enum):
    UNIQUE_POWER_LAW = "UniquePowerLaw"
    NO_UNIQUE_POWER_LAW = "NoUniquePowerLaw"

    def __str__(self) -> str:
        return self.value


def cross_correlation_diagnosis(
    curve: FluctuationCurve,
    fit: PowerLawFit,
    tau: float = 0.05,
    r2_min: float = 0.98,
) -> Diagnosis:
    """Decide whether a DXA curve follows one power law or wanders around zero.

    The curve has no unique power law if ``f2`` changes sign inside the fit
    range, if the negative share sits strictly between ``tau`` and
    ``1 - tau``, or if the log-log fit explains less than ``r2_min``.
    """
    if curve.kind is not CurveKind.DXA:
        raise InvalidInput(f"diagnosis needs a DXA curve, got {curve.kind.value}")
    lo, hi = fit.fit_range
    n = curve.scales.scales
    f2 = curve.f2[(n >= lo) & (n <= hi)]
    signs = np.sign(f2[f2 != 0])
    sign_change = signs.size > 0 and bool(np.any(signs != signs[0]))
    if sign_change or tau < fit.negative_fraction < 1.0 - tau or fit.r_squared < r2_min:
        return Diagnosis.NO_UNIQUE_POWER_LAW
    return Diagnosis.UNIQUE_POWER_LAW
