"""Lattice bridge sums for the edge of the step potential.

Paths are 2n-step +/-1 walks on a lattice of spacing ``eta`` in space and
``epsilon`` in time. An edge counts as spending time below the axis when its
midpoint height is negative, and each such edge carries the factor
``exp(-epsilon * V0)``. Bridges always have an even number of below edges, so
a bridge with 2k of them spends time ``2 k epsilon`` in x < 0.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .combinatorics import catalan_ratio

__all__ = [
    "MAX_ENUMERATION_N",
    "EnumerationLimitError",
    "LatticeSpec",
    "BelowTimeHistogram",
    "enumerate_bridges",
    "amplitude_closed_form",
    "amplitude_dp",
    "continuum_edge_estimate",
    "edge_factors",
    "transfer",
]

MAX_ENUMERATION_N = 12
_CHUNK_BITS = 20
# Beyond this the geometric-series numerator and denominator both round to 1.
_LARGE_EXPONENT = 700.0
_TINY_EXPONENT = 1e-290


class EnumerationLimitError(RuntimeError):
    """Exhaustive enumeration requested past :data:`MAX_ENUMERATION_N`."""


@dataclass(frozen=True)
class LatticeSpec:
    """Space-time lattice with ``epsilon / eta**2 == mass``."""

    n: int
    epsilon: float
    eta: float
    mass: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if not (self.epsilon > 0 and self.eta > 0 and self.mass > 0):
            raise ValueError("epsilon, eta and mass must be positive")
        if not math.isclose(self.epsilon / self.eta**2, self.mass, rel_tol=4e-16):
            raise ValueError(
                f"epsilon/eta**2 = {self.epsilon / self.eta**2!r} does not match mass {self.mass!r}"
            )

    @classmethod
    def from_time(cls, n, total_time, mass):
        epsilon = total_time / (2 * n)
        return cls(n=n, epsilon=epsilon, eta=math.sqrt(epsilon / mass), mass=mass)

    @property
    def total_time(self):
        return 2 * self.n * self.epsilon


@dataclass(frozen=True)
class BelowTimeHistogram:
    """``counts[k]`` = number of 2n-step bridges with 2k edges below the axis."""

    n: int
    counts: tuple

    def __post_init__(self):
        if len(self.counts) != self.n + 1:
            raise ValueError(f"expected {self.n + 1} counts, got {len(self.counts)}")

    @property
    def total(self):
        return sum(self.counts)

    def time_below(self, k, epsilon):
        return 2 * k * epsilon

    def weighted_sum(self, epsilon, V0):
        """Lattice amplitude ``4**-n * sum_k counts[k] * exp(-2 k epsilon V0)``."""
        norm = 1 << (2 * self.n)
        return math.fsum(
            (c / norm) * math.exp(-V0 * self.time_below(k, epsilon))
            for k, c in enumerate(self.counts)
        )


def _census_chunk(n, start, stop):
    steps = 2 * n
    codes = np.arange(start, stop, dtype=np.int64)
    height = np.zeros(codes.shape, dtype=np.int16)
    below = np.zeros(codes.shape, dtype=np.int16)
    for i in range(steps):
        new_height = height + (((codes >> i) & 1) * 2 - 1).astype(np.int16)
        below += np.minimum(height, new_height) < 0
        height = new_height
    returned = below[height == 0]
    return np.bincount(returned // 2, minlength=n + 1)


def enumerate_bridges(n, workers=1):
    """Brute-force census of all ``4**n`` walks, keeping the bridges.

    Step ``i`` of a walk is bit ``i`` of its code (1 = up). The walk space is
    cut into fixed chunks; ``workers`` only changes how chunks are scheduled,
    and the reduction runs in chunk order, so the result is independent of it.
    """
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n > MAX_ENUMERATION_N:
        raise EnumerationLimitError(
            f"exhaustive enumeration of 4**{n} walks exceeds the cap n <= {MAX_ENUMERATION_N}"
        )
    if n == 0:
        return BelowTimeHistogram(n=0, counts=(1,))
    total = 1 << (2 * n)
    chunk = 1 << _CHUNK_BITS
    bounds = [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _census_chunk(n, *b), bounds))
    else:
        parts = [_census_chunk(n, *b) for b in bounds]
    counts = np.zeros(n + 1, dtype=np.int64)
    for part in parts:
        counts += part
    return BelowTimeHistogram(n=n, counts=tuple(int(c) for c in counts))


def amplitude_closed_form(n, epsilon, V0):
    """Bridge sum with every ``n_k`` equal to the Catalan number.

    The sum over k is a geometric series; both of its factors go through
    ``expm1`` so small ``epsilon * V0`` loses no digits.
    """
    if V0 < 0:
        raise ValueError(f"V0 must be nonnegative, got {V0}")
    ratio = catalan_ratio(n)
    x = 2 * epsilon * V0
    # subnormal x makes the expm1 quotient inexact; the V0 = 0 value is exact there
    if x < _TINY_EXPONENT:
        return ratio * (n + 1)
    if x > _LARGE_EXPONENT:
        return ratio
    return ratio * math.expm1(-x * (n + 1)) / math.expm1(-x)


def edge_factors(midpoints, epsilon, V0):
    """Per-edge weight: ``exp(-epsilon V0)`` for negative midpoints, else 1."""
    return np.where(np.asarray(midpoints) < 0, math.exp(-epsilon * V0), 1.0)


def transfer(weights, factors, steps):
    """Advance walk weights ``steps`` times; both end sites are absorbing.

    ``factors[j]`` weights the edge between sites j and j+1. Each step carries
    probability 1/2.
    """
    w = np.array(weights, dtype=float)
    if w[0] != 0 or w[-1] != 0:
        raise ValueError("end sites must start empty")
    from_left = np.asarray(factors[:-1], dtype=float)
    from_right = np.asarray(factors[1:], dtype=float)
    nxt = np.zeros_like(w)
    tmp = np.empty(len(w) - 2)
    for _ in range(steps):
        inner = nxt[1:-1]
        np.multiply(w[:-2], from_left, out=inner)
        np.multiply(w[2:], from_right, out=tmp)
        inner += tmp
        inner *= 0.5
        w, nxt = nxt, w
    return w


def amplitude_dp(n, epsilon, V0):
    """Same bridge sum as :func:`amplitude_closed_form`, by transfer over heights."""
    if V0 < 0:
        raise ValueError(f"V0 must be nonnegative, got {V0}")
    # heights -(n+1)..(n+1); a walk at |h| = n+1 can no longer return to 0
    heights = np.arange(-(n + 1), n + 2)
    weights = np.zeros(len(heights))
    weights[n + 1] = 1.0
    factors = edge_factors(heights[:-1] + 0.5, epsilon, V0)
    return float(transfer(weights, factors, 2 * n)[n + 1])


def continuum_edge_estimate(n, m, V0, T):
    """``u / (2 eta)`` on the lattice with ``2n`` steps spanning time ``T``."""
    spec = LatticeSpec.from_time(n, T, m)
    return amplitude_closed_form(n, spec.epsilon, V0) / (2 * spec.eta)

