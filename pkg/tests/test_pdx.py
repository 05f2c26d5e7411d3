import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from stepprop.oracle import OracleGrid, transfer_matrix_propagator
from stepprop.pdx import (
    PropagationQuery,
    QuadratureError,
    QuadratureSpec,
    assemble_euclidean,
    assemble_terms,
    crossing_integral,
    crossing_kernel,
    same_side_term,
)
from stepprop.propagators import (
    PhysicalParams,
    boundary_derivative_euclidean,
    edge_euclidean,
    free_euclidean,
    restricted_euclidean,
)


def oracle_value(x0, x1, T, V0, eta=0.005):
    q = PropagationQuery(x0, x1, T)
    return transfer_matrix_propagator(q, PhysicalParams(1.0, V0), OracleGrid.build(q, 1.0, eta)).value


def test_input_validation():
    with pytest.raises(ValueError):
        PropagationQuery(1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(outer_nodes=4)
    q = PropagationQuery(0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        assemble_euclidean(q, PhysicalParams(1.0, 1.0))


def test_free_reconstruction_example():
    q = PropagationQuery(0.5, 0.5, 1.0)
    value = assemble_euclidean(q, PhysicalParams(1.0, 0.0))
    assert value == pytest.approx(free_euclidean(0.5, 0.5, 1.0, 1.0), rel=1e-4)
    assert value == pytest.approx(0.3989423, abs=1e-6)


@settings(deadline=None, max_examples=40)
@given(
    st.floats(0.2, 2.5),
    st.floats(0.2, 2.5),
    st.floats(0.3, 2.0),
    st.floats(0.3, 3.0),
    st.sampled_from([1, -1]),
)
def test_free_reconstruction_same_side(a, b, T, m, side):
    q = PropagationQuery(side * a, side * b, T)
    value = assemble_euclidean(q, PhysicalParams(m, 0.0))
    assert value == pytest.approx(free_euclidean(q.x1, q.x0, T, m), rel=1e-4)


def test_free_reconstruction_across():
    q = PropagationQuery(-0.5, 0.75, 1.0)
    value = assemble_euclidean(q, PhysicalParams(1.0, 0.0))
    assert value == pytest.approx(free_euclidean(0.75, -0.5, 1.0, 1.0), rel=1e-10)


def test_crossing_kernel_factorisation():
    q, p = PropagationQuery(0.5, 0.5, 1.0), PhysicalParams(1.0, 1.0)
    d1 = boundary_derivative_euclidean(0.5, 0.25, 1.0, 0.0)
    d0 = boundary_derivative_euclidean(0.5, 0.25, 1.0, 0.0)
    expected = d1 * edge_euclidean(0.5, 1.0, 1.0) * d0 / 4
    assert crossing_kernel(0.25, 0.75, q, p) == pytest.approx(expected, rel=1e-15)


def test_crossing_kernel_orientation_across_barrier():
    q, p = PropagationQuery(-0.5, 0.75, 1.0), PhysicalParams(2.0, 1.0)
    raw = (
        boundary_derivative_euclidean(0.75, 0.6, 2.0, 0.0)
        * edge_euclidean(0.3, 2.0, 1.0)
        * boundary_derivative_euclidean(-0.5, 0.1, 2.0, 1.0)
        / (4 * 2.0**2)
    )
    assert raw < 0
    assert crossing_kernel(0.1, 0.4, q, p) == pytest.approx(-raw, rel=1e-15)


def test_crossing_kernel_limits():
    q, p = PropagationQuery(0.5, 0.5, 1.0), PhysicalParams(1.0, 1.0)
    # inverse square root at the diagonal
    near = [crossing_kernel(0.4, 0.4 + s, q, p) * math.sqrt(s) for s in (1e-6, 1e-8, 1e-10)]
    assert near[1] == pytest.approx(near[0], rel=1e-3)
    assert near[2] == pytest.approx(near[1], rel=1e-3)
    # Gaussian suppression as t1 -> 0
    assert crossing_kernel(1e-4, 0.5, q, p) < 1e-200
    with pytest.raises(ValueError):
        crossing_kernel(0.6, 0.5, q, p)
    with pytest.raises(ValueError):
        crossing_kernel(0.1, 1.0, q, p)


def test_crossing_integral_matches_adaptive_quadrature():
    q, p = PropagationQuery(-0.5, 0.75, 1.0), PhysicalParams(1.0, 1.0)
    m, V0 = p.mass, p.V0

    def regular(t1, t2):
        # integrand times sqrt(t2 - t1); QUADPACK's algebraic weight supplies the rest
        s = t2 - t1
        edge_scaled = math.sqrt(m / (2 * math.pi))
        if s > 0:
            edge_scaled *= -math.expm1(-V0 * s) / (V0 * s)
        first = -boundary_derivative_euclidean(q.x0, t1, m, V0) / (2 * m) if t1 > 0 else 0.0
        last = boundary_derivative_euclidean(q.x1, q.T - t2, m, 0.0) / (2 * m)
        return last * edge_scaled * first

    def inner(t2):
        value, _ = integrate.quad(
            regular, 0, t2, args=(t2,), weight="alg", wvar=(0, -0.5), epsabs=0, epsrel=1e-11,
        )
        return value

    reference, _ = integrate.quad(inner, 0, q.T, epsabs=0, epsrel=1e-10, limit=200)
    assert crossing_integral(q, p) == pytest.approx(reference, rel=1e-8)


def test_same_side_term():
    p = PhysicalParams(1.0, 1.0)
    assert same_side_term(PropagationQuery(-0.5, 0.75, 1.0), p) == 0.0
    assert same_side_term(PropagationQuery(0.5, 0.75, 1.0), p) == restricted_euclidean(0.75, 0.5, 1.0, 1.0, 0.0)
    assert same_side_term(PropagationQuery(-0.5, -0.75, 1.0), p) == restricted_euclidean(-0.75, -0.5, 1.0, 1.0, 1.0)


def test_terms_sum_to_total():
    q, p = PropagationQuery(0.5, 1.0, 1.0), PhysicalParams(1.0, 1.0)
    same, crossing = assemble_terms(q, p)
    assert same + crossing == assemble_euclidean(q, p)


@pytest.mark.slow
@pytest.mark.parametrize("x0,x1", [(0.5, 0.5), (-0.5, 0.75)])
def test_agrees_with_oracle(x0, x1):
    q = PropagationQuery(x0, x1, 1.0)
    value = assemble_euclidean(q, PhysicalParams(1.0, 1.0))
    assert value == pytest.approx(oracle_value(x0, x1, 1.0, 1.0), rel=1e-2)


@settings(deadline=None, max_examples=30)
@given(
    st.floats(-2.0, 2.0).filter(lambda x: abs(x) > 0.2),
    st.floats(-2.0, 2.0).filter(lambda x: abs(x) > 0.2),
    st.floats(0.3, 2.0),
    st.floats(0.0, 3.0),
)
def test_symmetry_and_positivity(x0, x1, T, V0):
    p = PhysicalParams(1.0, V0)
    forward = assemble_euclidean(PropagationQuery(x0, x1, T), p)
    backward = assemble_euclidean(PropagationQuery(x1, x0, T), p)
    assert forward > 0
    assert forward == pytest.approx(backward, rel=1e-4)


@pytest.mark.parametrize("x0,x1", [(0.5, 0.5), (-0.5, 0.75), (1.0, 0.3)])
def test_quadrature_converges_systematically(x0, x1):
    q, p = PropagationQuery(x0, x1, 1.0), PhysicalParams(1.0, 1.0)
    values = [
        same_side_term(q, p) + crossing_integral(q, p, QuadratureSpec(n, n)) for n in (8, 16, 32)
    ]
    first, second = abs(values[1] - values[0]), abs(values[2] - values[1])
    assert second * 4 <= first


def test_diagonal_substitution_matters():
    q, p = PropagationQuery(0.5, 0.5, 1.0), PhysicalParams(1.0, 0.0)
    exact = free_euclidean(0.5, 0.5, 1.0, 1.0)
    with_sub = same_side_term(q, p) + crossing_integral(q, p, QuadratureSpec(32, 32))
    without = same_side_term(q, p) + crossing_integral(
        q, p, QuadratureSpec(32, 32, diagonal_substitution=False)
    )
    assert abs(with_sub - exact) < 1e-8 * exact
    assert abs(without - exact) > 1e-4 * exact


def test_non_convergence_is_reported():
    q, p = PropagationQuery(2.0, 0.01, 1.0), PhysicalParams(1.0, 1.0)
    with pytest.raises(QuadratureError) as info:
        assemble_euclidean(q, p, QuadratureSpec(8, 8))
    assert info.value.coarse != info.value.fine


def test_barrier_monotonicity():
    q = PropagationQuery(-0.5, 0.75, 1.0)
    values = [assemble_euclidean(q, PhysicalParams(1.0, V0)) for V0 in (0.0, 0.5, 1.0, 2.0)]
    assert all(a > b for a, b in zip(values, values[1:]))
