"""Detrended covariance (DXA) and detrended variance (DFA) fluctuation curves.

For a box parameter ``n`` the walk is cut into the ``N - n`` overlapping
boxes ``k = i..i+n`` (``n + 1`` points each, stride one).  In every box both
profiles are detrended by their own least-squares line and the residual
cross-products are summed and divided by ``n - 1``.  The per-scale value
``f2(n)`` is the mean of these box statistics over all ``N - n`` boxes; with
identical inputs it is the DFA detrended variance.

The kernel slides the box one step at a time, updating the normal-equation
sums (sum R, sum R', sum t R, sum t R', sum R R') in O(1) per step, so each
scale costs O(N).  Every ``n`` steps the sums are rebuilt relative to a new
anchor line through the block so the profile level and drift, which can be
huge compared with the in-box residuals, never enter the subtraction.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numba
import numpy as np

from .core import Profile, _as_series, build_profile
from .errors import InvalidInput, InvalidParameter

MIN_SCALE = 4


class CurveKind(enum.Enum):
    DFA = "DFA"
    DXA = "DXA"


@dataclass(frozen=True)
class ScaleGrid:
    scales: np.ndarray

    def __post_init__(self):
        s = np.array(self.scales, dtype=np.int64)
        if s.ndim != 1 or s.size == 0:
            raise InvalidParameter("scale grid must be a non-empty 1-D sequence")
        if s[0] < MIN_SCALE:
            raise InvalidParameter(f"scales must be >= {MIN_SCALE}, got {int(s[0])}")
        if np.any(np.diff(s) <= 0):
            raise InvalidParameter("scales must be strictly increasing")
        s.setflags(write=False)
        object.__setattr__(self, "scales", s)

    def __len__(self) -> int:
        return self.scales.size

    def __iter__(self):
        return iter(int(n) for n in self.scales)

    def check_length(self, length: int) -> None:
        if self.scales[-1] > length - 1:
            raise InvalidParameter(
                f"largest scale {int(self.scales[-1])} exceeds N - 1 = {length - 1}"
            )


@dataclass(frozen=True)
class FluctuationCurve:
    """Per-scale detrended covariance; ``f_signed = sign(f2) * sqrt(|f2|)``."""

    scales: ScaleGrid
    f2: np.ndarray
    kind: CurveKind
    series_length: int

    def __post_init__(self):
        f2 = np.array(self.f2, dtype=np.float64)
        if f2.shape != self.scales.scales.shape:
            raise InvalidInput(f"{f2.size} f2 values for {len(self.scales)} scales")
        kind = CurveKind(self.kind)
        if kind is CurveKind.DFA and np.any(f2 < 0):
            raise InvalidInput("DFA curve has a negative detrended variance")
        f2.setflags(write=False)
        object.__setattr__(self, "f2", f2)
        object.__setattr__(self, "kind", kind)

    @property
    def f_signed(self) -> np.ndarray:
        return np.sign(self.f2) * np.sqrt(np.abs(self.f2))

    @property
    def negative_fraction(self) -> float:
        return float(np.mean(self.f2 < 0))


def scale_grid(n_min: int, n_max: int, points: int) -> ScaleGrid:
    """Up to ``points`` log-spaced integers from ``n_min`` to ``n_max`` inclusive."""
    n_min, n_max, points = int(n_min), int(n_max), int(points)
    if n_min < MIN_SCALE:
        raise InvalidParameter(f"n_min must be >= {MIN_SCALE}, got {n_min}")
    if n_max <= n_min:
        raise InvalidParameter(f"n_max must exceed n_min, got [{n_min}, {n_max}]")
    if points < 2:
        raise InvalidParameter(f"points must be >= 2, got {points}")
    raw = np.rint(np.geomspace(n_min, n_max, points)).astype(np.int64)
    raw[0], raw[-1] = n_min, n_max
    return ScaleGrid(np.unique(raw))


def default_grid(length: int, points: int = 40) -> ScaleGrid:
    """16 .. N/4 with ``points`` log-spaced entries."""
    return scale_grid(16, length // 4, points)


def _profile_values(p) -> np.ndarray:
    return p.values if isinstance(p, Profile) else np.asarray(p, dtype=np.float64)


def local_trend_fit(profile, start: int, n: int) -> tuple[float, float]:
    """OLS line through profile points ``start..start+n`` (1-based abscissae).

    Returns ``(intercept, slope)`` so the trend at abscissa ``k`` is
    ``intercept + slope * k``.
    """
    r = _profile_values(profile)
    start, n = int(start), int(n)
    if n < 1 or start < 1 or start + n > r.size:
        raise InvalidInput(f"box [{start}, {start + n}] outside profile of length {r.size}")
    seg = r[start - 1:start + n]
    t = np.arange(n + 1, dtype=np.float64)
    t_mean = n / 2.0
    seg_mean = seg.mean()
    slope = float(np.dot(t - t_mean, seg - seg_mean) / np.dot(t - t_mean, t - t_mean))
    intercept = float(seg_mean - slope * (t_mean + start))
    return intercept, slope


@numba.njit(cache=True)
def _kadd(s, c, v):
    # Neumaier step; returns updated (sum, compensation).
    t = s + v
    if abs(s) >= abs(v):
        c += (s - t) + v
    else:
        c += (v - t) + s
    return t, c


@numba.njit(cache=True)
def _box_residual_mean(ra, rb, n):
    N = ra.shape[0]
    m = n + 1
    nbox = N - n
    stt = m * (m * m - 1.0) / 12.0
    acc = 0.0
    acc_c = 0.0
    for s0 in range(0, nbox, n):
        # Residuals are unchanged by subtracting any line in t, so remove the
        # chord through the block's first box to keep the sums small.
        anchor_a = ra[s0]
        anchor_b = rb[s0]
        chord_a = (ra[s0 + n] - anchor_a) / n
        chord_b = (rb[s0 + n] - anchor_b) / n
        sa = sa_c = sb = sb_c = sab = sab_c = sta = sta_c = stb = stb_c = 0.0
        for t in range(m):
            da = ra[s0 + t] - (anchor_a + chord_a * t)
            db = rb[s0 + t] - (anchor_b + chord_b * t)
            sa, sa_c = _kadd(sa, sa_c, da)
            sb, sb_c = _kadd(sb, sb_c, db)
            sab, sab_c = _kadd(sab, sab_c, da * db)
            sta, sta_c = _kadd(sta, sta_c, t * da)
            stb, stb_c = _kadd(stb, stb_c, t * db)
        last = min(n, nbox - s0)
        for u in range(last):
            SA = sa + sa_c
            SB = sb + sb_c
            st = m * (u + 0.5 * n)
            cab = (sab + sab_c) - SA * SB / m
            cta = (sta + sta_c) - st * SA / m
            ctb = (stb + stb_c) - st * SB / m
            acc, acc_c = _kadd(acc, acc_c, cab - cta * ctb / stt)
            if u + 1 < last:
                # slide: drop local t = u, add t = u + n + 1
                da = ra[s0 + u] - (anchor_a + chord_a * u)
                db = rb[s0 + u] - (anchor_b + chord_b * u)
                sa, sa_c = _kadd(sa, sa_c, -da)
                sb, sb_c = _kadd(sb, sb_c, -db)
                sab, sab_c = _kadd(sab, sab_c, -(da * db))
                sta, sta_c = _kadd(sta, sta_c, -(u * da))
                stb, stb_c = _kadd(stb, stb_c, -(u * db))
                t = u + n + 1
                da = ra[s0 + t] - (anchor_a + chord_a * t)
                db = rb[s0 + t] - (anchor_b + chord_b * t)
                sa, sa_c = _kadd(sa, sa_c, da)
                sb, sb_c = _kadd(sb, sb_c, db)
                sab, sab_c = _kadd(sab, sab_c, da * db)
                sta, sta_c = _kadd(sta, sta_c, t * da)
                stb, stb_c = _kadd(stb, stb_c, t * db)
    return (acc + acc_c) / nbox / (n - 1)


def detrended_covariance_at_scale(profile_a, profile_b, n: int) -> float:
    """Mean over the ``N - n`` boxes of the per-box detrended covariance."""
    ra = np.ascontiguousarray(_profile_values(profile_a), dtype=np.float64)
    rb = np.ascontiguousarray(_profile_values(profile_b), dtype=np.float64)
    if ra.shape != rb.shape:
        raise InvalidInput(f"profile lengths differ: {ra.size} vs {rb.size}")
    n = int(n)
    if not MIN_SCALE <= n <= ra.size - 1:
        raise InvalidParameter(f"scale n={n} outside [{MIN_SCALE}, N-1={ra.size - 1}]")
    return float(_box_residual_mean(ra, rb, n))


def _curve(ra, rb, grid: ScaleGrid, kind: CurveKind) -> FluctuationCurve:
    grid.check_length(ra.size)
    f2 = np.array([_box_residual_mean(ra, rb, int(n)) for n in grid.scales])
    if kind is CurveKind.DFA:
        # Exact-zero residuals can round to -0 or -1e-30; a variance is never negative.
        f2 = np.maximum(f2, 0.0)
    return FluctuationCurve(grid, f2, kind, ra.size)


def dxa_curve(series_a, series_b, grid: ScaleGrid | None = None) -> FluctuationCurve:
    a, b = _as_series(series_a), _as_series(series_b)
    if len(a) != len(b):
        raise InvalidInput(f"series lengths differ: {len(a)} vs {len(b)}")
    if grid is None:
        grid = default_grid(len(a))
    ra = build_profile(a).values
    rb = ra if b is a else build_profile(b).values
    return _curve(ra, rb, grid, CurveKind.DXA)


def dfa_curve(series, grid: ScaleGrid | None = None) -> FluctuationCurve:
    s = _as_series(series)
    if grid is None:
        grid = default_grid(len(s))
    r = build_profile(s).values
    return _curve(r, r, grid, CurveKind.DFA)


__all__ = [
    "CurveKind",
    "FluctuationCurve",
    "ScaleGrid",
    "default_grid",
    "detrended_covariance_at_scale",
    "dfa_curve",
    "dxa_curve",
    "local_trend_fit",
    "scale_grid",
]
