"""Closed-form kernels for the step potential ``V(x) = V0 * Theta(-x)``, hbar = 1.

Euclidean kernels solve ``dg/dt = (1/2m) d2g/dx2 - V g``. Restricted kernels
vanish on x = 0 (method of images). The Euclidean kernels broadcast over numpy
arrays of positions and times.
"""
import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PhysicalParams",
    "free_euclidean",
    "constant_potential_euclidean",
    "restricted_euclidean",
    "boundary_derivative_euclidean",
    "edge_euclidean",
    "edge_realtime",
]


@dataclass(frozen=True)
class PhysicalParams:
    mass: float
    V0: float = 0.0

    hbar = 1.0

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if not self.V0 >= 0:
            raise ValueError(f"V0 must be nonnegative, got {self.V0}")

    def potential(self, x):
        """Potential energy at ``x``; the left half-line carries the step."""
        return self.V0 if x < 0 else 0.0


# below this V0*T is subnormal and the closed forms lose meaning; use the limit
_TINY = 1e-290


def _check_time(t):
    if not np.all(np.asarray(t) > 0):
        raise ValueError(f"time must be positive, got {t}")


def free_euclidean(x1, x0, t, m):
    _check_time(t)
    return np.sqrt(m / (2 * np.pi * t)) * np.exp(-m * (x1 - x0) ** 2 / (2 * t))


def constant_potential_euclidean(x1, x0, t, m, V):
    return free_euclidean(x1, x0, t, m) * np.exp(-V * t)


def restricted_euclidean(x1, x0, t, m, V):
    """Kernel for paths that never touch x = 0, by the image construction.

    Endpoints on opposite sides are rejected rather than returning 0.
    """
    _check_time(t)
    if np.any(np.asarray(x0) * np.asarray(x1) < 0):
        raise ValueError(f"endpoints {x0} and {x1} lie on opposite sides of the barrier")
    # K(x1 - x0) - K(x1 + x0) = K(x1 - x0) * (1 - exp(-2 m x0 x1 / t))
    return -constant_potential_euclidean(x1, x0, t, m, V) * np.expm1(-2 * m * x0 * x1 / t)


def boundary_derivative_euclidean(x0, t, m, V):
    """``d/dx restricted_euclidean(x, x0, t, m, V)`` at x = 0; carries sign(x0)."""
    _check_time(t)
    if np.any(np.asarray(x0) == 0):
        raise ValueError("boundary derivative needs x0 != 0")
    return (2 * m * x0 / t) * constant_potential_euclidean(x0, 0.0, t, m, V)


def edge_euclidean(T, m, V0):
    """Euclidean propagator from x = 0 back to x = 0 across the step."""
    _check_time(T)
    x = np.asarray(V0 * T, dtype=float)
    live = x > _TINY
    safe = np.where(live, x, 1.0)
    # (1 - exp(-x)) / x, with its x -> 0 limit
    factor = np.where(live, -np.expm1(-safe) / safe, 1.0)
    return (np.sqrt(m / (2 * np.pi * T)) * factor)[()]


def edge_realtime(T, m, V0):
    """Real-time edge propagator as a complex number.

    ``(1/i)**0.5`` is taken on the principal branch, ``exp(-i pi/4)``. The
    numerator is written as ``1 - exp(-i a) = 2i sin(a/2) exp(-i a/2)`` so the
    ``V0 -> 0`` limit is continuous.
    """
    _check_time(T)
    a = V0 * T
    sinc = 1.0 if a < _TINY else math.sin(a / 2) / (a / 2)
    amplitude = math.sqrt(m / (2 * math.pi * T)) * sinc
    return amplitude * cmath.exp(-1j * (math.pi / 4 + a / 2))
