"""Brute-force reference: the lattice path sum for arbitrary endpoints.

Walk weights are pushed through the step-potential lattice with the same
transfer step and below-axis edge rule as :mod:`stepprop.lattice`, on a window
``|x| <= half_width`` with absorbing ends.
"""
import math
from dataclasses import dataclass

import numpy as np

from .lattice import edge_factors, transfer

__all__ = [
    "GridMismatchError",
    "OracleGrid",
    "OracleResult",
    "transfer_matrix_propagator",
    "richardson_extrapolate",
]

# Gaussian widths kept between the endpoints and the absorbing window ends.
SAFETY_WIDTHS = 5.0


class GridMismatchError(ValueError):
    """Query cannot be placed on the requested lattice."""


@dataclass(frozen=True)
class OracleGrid:
    eta: float
    epsilon: float
    half_width: float
    steps: int

    def __post_init__(self):
        if self.steps < 2 or self.steps % 2:
            raise GridMismatchError(f"step count must be even and positive, got {self.steps}")
        if not (self.eta > 0 and self.epsilon > 0 and self.half_width > 0):
            raise ValueError("eta, epsilon and half_width must be positive")

    @classmethod
    def build(cls, q, mass, eta, half_width=None):
        """Grid with ``epsilon = mass * eta**2`` and ``steps * epsilon = q.T``.

        ``q.T / (mass * eta**2)`` must be an even integer.
        """
        ratio = q.T / (mass * eta**2)
        steps = round(ratio)
        if steps < 2 or steps % 2 or not math.isclose(ratio, steps, rel_tol=1e-9):
            raise GridMismatchError(
                f"T/(m eta^2) = {ratio!r} is not an even integer; pick eta to match T"
            )
        if half_width is None:
            half_width = minimum_half_width(q, mass)
        return cls(eta=eta, epsilon=q.T / steps, half_width=half_width, steps=steps)

    @property
    def sites(self):
        """Site indices j; the position of site j is ``j * eta``."""
        J = math.ceil(self.half_width / self.eta - 1e-9)
        return np.arange(-J, J + 1)

    @property
    def total_time(self):
        return self.steps * self.epsilon


@dataclass(frozen=True)
class OracleResult:
    value: float
    x0_site: float
    x1_site: float
    total_weight: float

    @property
    def snap(self):
        return self.x0_site, self.x1_site


def minimum_half_width(q, mass):
    return SAFETY_WIDTHS * math.sqrt(q.T / mass) + max(abs(q.x0), abs(q.x1))


def transfer_matrix_propagator(q, p, grid):
    """Euclidean propagator ``g(x1, T | x0, 0)`` as weight at x1 over ``2 eta``.

    Endpoints snap to the nearest site. After an even number of steps only
    sites of the starting parity are reachable, so an x1 whose nearest site has
    the other parity raises :class:`GridMismatchError`.
    """
    if not math.isclose(grid.epsilon, p.mass * grid.eta**2, rel_tol=1e-9):
        raise GridMismatchError("grid epsilon does not equal mass * eta**2")
    if not math.isclose(grid.total_time, q.T, rel_tol=1e-12):
        raise GridMismatchError(f"grid spans time {grid.total_time!r}, query needs {q.T!r}")
    if grid.half_width < minimum_half_width(q, p.mass) * (1 - 1e-12):
        raise ValueError(
            f"half_width {grid.half_width} is below the truncation margin "
            f"{minimum_half_width(q, p.mass)}"
        )
    sites = grid.sites
    J = sites[-1]
    j0 = round(q.x0 / grid.eta)
    j1 = round(q.x1 / grid.eta)
    if (j1 - j0 - grid.steps) % 2:
        raise GridMismatchError(
            f"x1 = {q.x1} snaps to site {j1}, unreachable from site {j0} in {grid.steps} steps"
        )
    weights = np.zeros(len(sites))
    weights[j0 + J] = 1.0
    # edge j -> j+1 has midpoint (j + 1/2) eta
    factors = edge_factors(sites[:-1] + 0.5, grid.epsilon, p.V0)
    final = transfer(weights, factors, grid.steps)
    return OracleResult(
        value=float(final[j1 + J] / (2 * grid.eta)),
        x0_site=j0 * grid.eta,
        x1_site=j1 * grid.eta,
        total_weight=float(final.sum()),
    )


def richardson_extrapolate(values, order=1):
    """Extrapolate to ``eta -> 0`` from the two finest ``(eta, value)`` levels.

    Assumes ``value(eta) = limit + c * eta**order``; the default is the
    first-order (linear) model. Grid levels need not be exact halvings.
    """
    levels = sorted(values, key=lambda pair: pair[0])
    if len(levels) < 2:
        raise ValueError("Richardson extrapolation needs at least two grid levels")
    if order < 1:
        raise ValueError(f"order must be positive, got {order}")
    (h_fine, v_fine), (h_coarse, v_coarse) = levels[0], levels[1]
    if not 0 < h_fine < h_coarse:
        raise ValueError(f"grid spacings must be positive and distinct, got {h_fine}, {h_coarse}")
    a, b = h_coarse**order, h_fine**order
    return v_fine + (v_fine - v_coarse) * b / (a - b)
