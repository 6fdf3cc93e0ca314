"""Long-memory series from the fractionally integrated AR(infinity) recursion.

Each output sample is

    y_i = sum_{j=1}^{W} a_j(rho) y_{i-j} + eta_i

with positive weights ``a_1 = rho`` and ``a_{j+1} = a_j (j - rho) / (j + 1)``.
These are the coefficients of ``1 - (1 - B)^rho`` and sum to one over all
lags; the resulting process has Hurst exponent ``H = 0.5 + rho``.

Noise is i.i.d. standard Gaussian from numpy's PCG64.  Stream ``k`` for a seed
``s`` is seeded with ``SeedSequence(s, spawn_key=(k,))``; stream 0 drives a
single series and the first member of a pair, stream 1 the second member of an
independent pair.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numba
import numpy as np

from .core import TimeSeries
from .errors import InvalidInput, InvalidParameter

DEFAULT_TRUNCATION = 10_000


class CouplingMode(enum.Enum):
    SAME = "same"
    NEGATED = "negated"
    INDEPENDENT = "independent"

    @classmethod
    def parse(cls, value) -> "CouplingMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidParameter(
                f"unknown coupling {value!r}; choose from {[m.value for m in cls]}"
            ) from None


def _check_rho(rho: float) -> float:
    rho = float(rho)
    if not 0.0 < rho < 0.5:
        raise InvalidParameter(f"rho out of (0,0.5): {rho}")
    return rho


@dataclass(frozen=True)
class ArfimaSpec:
    """Generator parameters.

    ``burn_in`` defaults to ``truncation``.  ``truncation=0`` is accepted and
    degenerates to plain white noise.
    """

    rho: float
    length: int
    truncation: int = DEFAULT_TRUNCATION
    seed: int = 42
    burn_in: int | None = None

    def __post_init__(self):
        _check_rho(self.rho)
        if int(self.length) < 1:
            raise InvalidParameter(f"length must be >= 1, got {self.length}")
        if int(self.truncation) < 0:
            raise InvalidParameter(f"truncation must be >= 0, got {self.truncation}")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidParameter(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.burn_in is None:
            object.__setattr__(self, "burn_in", int(self.truncation))
        elif int(self.burn_in) < 0:
            raise InvalidParameter(f"burn_in must be >= 0, got {self.burn_in}")

    @property
    def total_length(self) -> int:
        return int(self.length) + int(self.burn_in)

    @property
    def hurst(self) -> float:
        return 0.5 + self.rho


def arfima_weights(rho: float, count: int) -> np.ndarray:
    """Weights ``a_1..a_count`` by recurrence (no Gamma evaluations)."""
    rho = _check_rho(rho)
    count = int(count)
    if count < 1:
        raise InvalidParameter(f"count must be >= 1, got {count}")
    factors = np.empty(count)
    factors[0] = rho
    j = np.arange(1, count, dtype=np.float64)
    factors[1:] = (j - rho) / (j + 1.0)
    # cumprod is the sequential recurrence a_{j+1} = a_j * factor_j
    return np.cumprod(factors)


def noise_stream(seed: int, stream: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(stream),))
    return np.random.Generator(np.random.PCG64(ss))


@numba.njit(cache=True)
def _recursion(a, eta):
    # Strictly sequential summation order so output is reproducible bit for bit.
    total = eta.shape[0]
    w = a.shape[0]
    y = np.zeros(total)
    for i in range(total):
        lags = i if i < w else w
        s = 0.0
        for j in range(lags):
            s += a[j] * y[i - 1 - j]
        y[i] = s + eta[i]
    return y


def arfima_generate(spec: ArfimaSpec, noise=None) -> TimeSeries:
    """Run the truncated recursion and drop the first ``burn_in`` samples.

    ``noise`` may be an explicit array (its first ``length + burn_in`` values
    are used), a :class:`numpy.random.Generator`, or ``None`` to draw from
    stream 0 of ``spec.seed``.
    """
    total = spec.total_length
    if noise is None:
        noise = noise_stream(spec.seed, 0)
    if isinstance(noise, np.random.Generator):
        eta = noise.standard_normal(total)
    else:
        eta = np.asarray(noise, dtype=np.float64)
        if eta.ndim != 1 or eta.size < total:
            raise InvalidInput(
                f"need at least {total} noise samples (length {spec.length} + burn-in "
                f"{spec.burn_in}), got {eta.size}"
            )
        eta = eta[:total]
    if spec.truncation == 0:
        y = eta.copy()
    else:
        a = arfima_weights(spec.rho, spec.truncation)
        y = _recursion(a, np.ascontiguousarray(eta))
    return TimeSeries(y[spec.burn_in:], label=f"arfima(rho={spec.rho:g})")


def generate_pair(spec_a: ArfimaSpec, spec_b: ArfimaSpec, mode=CouplingMode.SAME):
    """Two series whose innovations are equal, negated or independent.

    Both series are driven by ``spec_a.seed``; ``spec_b.seed`` is ignored so a
    single seed reproduces the whole pair.  Shared noise is aligned on the last
    sample, so output index ``i`` of both series sees the same innovation even
    if the burn-ins differ.
    """
    mode = CouplingMode.parse(mode)
    if spec_a.length != spec_b.length:
        raise InvalidInput(f"pair lengths differ: {spec_a.length} vs {spec_b.length}")
    if mode is CouplingMode.INDEPENDENT:
        a = arfima_generate(spec_a, noise_stream(spec_a.seed, 0))
        b = arfima_generate(spec_b, noise_stream(spec_a.seed, 1))
        return a, b
    need = max(spec_a.total_length, spec_b.total_length)
    eta = noise_stream(spec_a.seed, 0).standard_normal(need)
    eta_b = eta if mode is CouplingMode.SAME else -eta
    a = arfima_generate(spec_a, eta[need - spec_a.total_length:])
    b = arfima_generate(spec_b, eta_b[need - spec_b.total_length:])
    return a, b
