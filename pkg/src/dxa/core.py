"""Series containers and the deterministic transforms applied before analysis.

A :class:`TimeSeries` holds the raw samples ``y_1..y_N``.  Its random-walk
representation is the :class:`Profile` ``R_k = y_1 + ... + y_k``, which is the
object the fluctuation engine detrends.  Profiles are accumulated with
Neumaier-compensated summation so that long, heavy-tailed inputs do not lose
precision in the running total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import InvalidInput


def _frozen_array(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1:
        raise InvalidInput(f"{name} must be one-dimensional, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """Finite, ordered sequence of real samples.

    NaN and infinite samples are rejected at construction; nothing is
    silently dropped or interpolated.
    """

    samples: np.ndarray
    label: str | None = None

    def __post_init__(self):
        arr = _frozen_array(self.samples, "samples")
        if arr.size == 0:
            raise InvalidInput("time series must contain at least one sample")
        if not np.all(np.isfinite(arr)):
            bad = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise InvalidInput(f"non-finite sample at index {bad}")
        object.__setattr__(self, "samples", arr)

    def __len__(self) -> int:
        return self.samples.size

    def __array__(self, dtype=None, copy=None):
        return self.samples if dtype is None else self.samples.astype(dtype)

    def with_samples(self, samples) -> "TimeSeries":
        return TimeSeries(samples, self.label)


@dataclass(frozen=True)
class Profile:
    """Integrated walk of a series; ``values[k] - values[k-1]`` is sample ``k``."""

    values: np.ndarray
    source_length: int = field(default=-1)

    def __post_init__(self):
        arr = _frozen_array(self.values, "values")
        object.__setattr__(self, "values", arr)
        if self.source_length < 0:
            object.__setattr__(self, "source_length", arr.size)
        elif self.source_length != arr.size:
            raise InvalidInput(
                f"profile has {arr.size} values but source_length={self.source_length}"
            )

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class StationaryMoments:
    mean: float
    variance: float

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)


def _as_series(series) -> TimeSeries:
    if isinstance(series, TimeSeries):
        return series
    try:
        return TimeSeries(series)
    except InvalidInput:
        raise
    except (TypeError, ValueError) as exc:
        raise InvalidInput(str(exc)) from exc


@numba.njit(cache=True)
def _compensated_cumsum(x):
    out = np.empty_like(x)
    total = 0.0
    comp = 0.0
    for i in range(x.shape[0]):
        v = x[i]
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
        out[i] = total + comp
    return out


def compensated_cumsum(values) -> np.ndarray:
    """Running sums of ``values`` with Neumaier error compensation."""
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.size == 0:
        return arr.copy()
    return _compensated_cumsum(arr)


def moments(series) -> StationaryMoments:
    """Sample mean and biased (1/N) variance."""
    y = _as_series(series).samples
    mu = math.fsum(y) / y.size
    var = math.fsum((y - mu) ** 2) / y.size
    return StationaryMoments(mean=mu, variance=var)


def build_profile(series) -> Profile:
    """Cumulative sums ``R_k = sum_{i<=k} y_i``; no mean removal."""
    y = _as_series(series).samples
    return Profile(compensated_cumsum(y), y.size)


def integrated_profile(series) -> Profile:
    """Mean-removed walk ``I(n) = sum_{i<=n} (y_i - mean)``; ends at ~0."""
    y = _as_series(series).samples
    mu = math.fsum(y) / y.size
    return Profile(compensated_cumsum(y - mu), y.size)


def diff(series) -> TimeSeries:
    s = _as_series(series)
    if len(s) < 2:
        raise InvalidInput("diff needs at least 2 samples")
    return s.with_samples(np.diff(s.samples))


def log_diff(series) -> TimeSeries:
    """Successive differences of natural logarithms."""
    s = _as_series(series)
    if len(s) < 2:
        raise InvalidInput("log_diff needs at least 2 samples")
    if np.any(s.samples <= 0):
        bad = int(np.flatnonzero(s.samples <= 0)[0])
        raise InvalidInput(f"log_diff needs positive samples; index {bad} is {s.samples[bad]!r}")
    return s.with_samples(np.diff(np.log(s.samples)))


def abs_values(series) -> TimeSeries:
    s = _as_series(series)
    return s.with_samples(np.abs(s.samples))


def integrate(series) -> TimeSeries:
    """:func:`integrated_profile` returned as a series, for use in transform chains."""
    s = _as_series(series)
    return s.with_samples(integrated_profile(s).values)


TRANSFORMS = {
    "diff": diff,
    "log-diff": log_diff,
    "abs": abs_values,
    "integrate": integrate,
}


def apply_chain(series, chain) -> TimeSeries:
    """Apply named transforms left to right.

    ``chain`` is an iterable of names from :data:`TRANSFORMS` or a
    comma-separated string.  Failures are re-raised naming the stage.
    """
    if isinstance(chain, str):
        chain = [c.strip() for c in chain.split(",") if c.strip()]
    out = _as_series(series)
    for pos, name in enumerate(chain, start=1):
        try:
            fn = TRANSFORMS[name]
        except KeyError:
            raise InvalidInput(
                f"unknown transform {name!r} at stage {pos}; choose from {sorted(TRANSFORMS)}"
            ) from None
        try:
            out = fn(out)
        except InvalidInput as exc:
            raise InvalidInput(f"transform stage {pos} ({name}): {exc}") from exc
    return out
