"""Euclidean step-potential propagator for arbitrary endpoints.

Paths from x0 to x1 are split at their first (t1) and last (t2) visit to
x = 0: a restricted piece x0 -> 0, an unrestricted edge piece 0 -> 0 of
duration t2 - t1, and a restricted piece 0 -> x1. With hbar = 1 the two
boundary pieces enter as ``d/dx g_r / (2m)`` taken along the normal pointing
into each endpoint's half-line, which makes every factor a positive
first-passage density. Endpoints on the same side add the never-crossing
restricted kernel.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .propagators import (
    PhysicalParams,
    boundary_derivative_euclidean,
    edge_euclidean,
    restricted_euclidean,
)

__all__ = [
    "PropagationQuery",
    "QuadratureSpec",
    "QuadratureError",
    "crossing_kernel",
    "crossing_integral",
    "same_side_term",
    "assemble_terms",
    "assemble_euclidean",
]


@dataclass(frozen=True)
class PropagationQuery:
    x0: float
    x1: float
    T: float

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T}")


@dataclass(frozen=True)
class QuadratureSpec:
    """Gauss-Legendre nodes per panel for the t2 (outer) and t1 (inner) integrals.

    Each integral is split into two panels at its midpoint. With
    ``diagonal_substitution`` the panel touching t1 = t2 uses
    ``t2 - t1 = (t2/2) w**2``, cancelling the inverse square root of the edge
    kernel. With ``endpoint_substitution`` the panels touching t1 = 0 and
    t2 = T get the same quadratic map to cluster nodes where the restricted
    pieces switch on.
    """

    outer_nodes: int = 64
    inner_nodes: int = 64
    diagonal_substitution: bool = True
    endpoint_substitution: bool = True
    rtol: float = 1e-4

    def __post_init__(self):
        if self.outer_nodes < 8 or self.inner_nodes < 8:
            raise ValueError("node counts must be at least 8")

    def refined(self):
        return QuadratureSpec(
            2 * self.outer_nodes,
            2 * self.inner_nodes,
            self.diagonal_substitution,
            self.endpoint_substitution,
            self.rtol,
        )


class QuadratureError(ArithmeticError):
    """Successive quadrature refinements disagree beyond tolerance."""

    def __init__(self, coarse, fine, rtol):
        self.coarse = coarse
        self.fine = fine
        self.rtol = rtol
        super().__init__(
            f"quadrature did not converge: {coarse!r} vs {fine!r} (rtol {rtol:g})"
        )


def _check_endpoints(q):
    if q.x0 == 0 or q.x1 == 0:
        raise ValueError("PDX assembly needs x0 != 0 and x1 != 0; use the edge propagator")


def _entry_density(x, t, p):
    # first-passage density to 0 from x (or last-exit density from 0 to x)
    V = p.potential(x)
    return np.sign(x) * boundary_derivative_euclidean(x, t, p.mass, V) / (2 * p.mass)


def crossing_kernel(t1, t2, q, p):
    """Integrand of the crossing term at first/last crossing times ``t1 < t2``.

    Includes the ``1/(4 m**2)`` prefactor and the inward-normal orientation,
    so it is positive and integrates over the simplex to the crossing term.
    """
    _check_endpoints(q)
    if not 0 < t1 < t2 < q.T:
        raise ValueError(f"need 0 < t1 < t2 < T, got t1={t1}, t2={t2}, T={q.T}")
    return float(
        _entry_density(q.x1, q.T - t2, p)
        * edge_euclidean(t2 - t1, p.mass, p.V0)
        * _entry_density(q.x0, t1, p)
    )


@lru_cache(maxsize=None)
def _unit_rule(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1) / 2, w / 2


def _panel(n, length, quadratic):
    """Nodes as offsets in [0, length] from the panel's anchor, with weights.

    ``quadratic`` maps ``offset = length * u**2`` to cluster nodes at the anchor.
    """
    u, w = _unit_rule(n)
    if quadratic:
        return length * u**2, w * 2 * length * u
    return length * u, w * length


def _nodes(n, lo, hi, cluster_lo, cluster_hi):
    """Two-panel rule on [lo, hi]: nodes, their distances below hi, weights."""
    half = (hi - lo) / 2
    a, wa = _panel(n, half, cluster_lo)
    b, wb = _panel(n, half, cluster_hi)
    return (
        np.concatenate([lo + a, hi - b]),
        np.concatenate([(hi - lo) - a, b]),
        np.concatenate([wa, wb]),
    )


def crossing_integral(q, p, quad=QuadratureSpec()):
    """Integral of :func:`crossing_kernel` over ``0 < t1 < t2 < T``."""
    _check_endpoints(q)
    T = q.T
    t2, rest, w2 = _nodes(
        quad.outer_nodes, 0.0, T, quad.endpoint_substitution, quad.endpoint_substitution
    )
    # inner rule on [0, 1], scaled by each t2: t1 = t2 * v
    v, one_minus_v, wv = _nodes(
        quad.inner_nodes, 0.0, 1.0, quad.endpoint_substitution, quad.diagonal_substitution
    )
    t1 = t2[:, None] * v[None, :]
    gap = t2[:, None] * one_minus_v[None, :]
    w1 = t2[:, None] * wv[None, :]
    inner = (edge_euclidean(gap, p.mass, p.V0) * _entry_density(q.x0, t1, p) * w1).sum(axis=1)
    outer = _entry_density(q.x1, rest, p) * inner
    return float(np.dot(w2, outer))


def same_side_term(q, p):
    """Never-crossing contribution; zero when the endpoints straddle x = 0."""
    _check_endpoints(q)
    if (q.x0 > 0) != (q.x1 > 0):
        return 0.0
    return float(restricted_euclidean(q.x1, q.x0, q.T, p.mass, p.potential(q.x0)))


def assemble_terms(q, p, quad=QuadratureSpec()):
    """``(same_side, crossing)`` contributions to the propagator.

    The crossing integral is evaluated at ``quad`` and at doubled node counts;
    the finer value is kept, and :class:`QuadratureError` is raised if the two
    totals differ by more than ``quad.rtol`` relative.
    """
    same = same_side_term(q, p)
    coarse = same + crossing_integral(q, p, quad)
    crossing = crossing_integral(q, p, quad.refined())
    fine = same + crossing
    if abs(fine - coarse) > quad.rtol * abs(fine):
        raise QuadratureError(coarse, fine, quad.rtol)
    return same, crossing


def assemble_euclidean(q, p, quad=QuadratureSpec()):
    """Full Euclidean propagator ``g(x1, T | x0, 0)``; see :func:`assemble_terms`."""
    same, crossing = assemble_terms(q, p, quad)
    return same + crossing
