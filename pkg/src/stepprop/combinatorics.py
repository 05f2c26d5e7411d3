"""Exact integer combinatorics for lattice bridge counting."""
import math

import mpmath

__all__ = ["binomial", "catalan", "catalan_asymptotic", "catalan_ratio"]


def binomial(a, b):
    """Exact binomial coefficient ``a choose b`` as a Python int."""
    a = _nonnegative_int(a, "a")
    b = _nonnegative_int(b, "b")
    if b > a:
        raise ValueError(f"binomial({a}, {b}): b must not exceed a")
    return math.comb(a, b)


def catalan(n):
    """n-th Catalan number, exactly."""
    n = _nonnegative_int(n, "n")
    num = binomial(2 * n, n)
    c, rem = divmod(num, n + 1)
    assert rem == 0
    return c


def catalan_asymptotic(n):
    """Leading asymptotic form ``4**n / (sqrt(pi) * n**1.5)``.

    Evaluated in log space and returned as an ``mpmath.mpf``; a double would
    overflow for n above roughly 515.
    """
    n = _nonnegative_int(n, "n")
    if n == 0:
        raise ValueError("catalan_asymptotic is singular at n = 0")
    log_value = 2 * n * mpmath.log(2) - mpmath.log(mpmath.pi) / 2 - 1.5 * mpmath.log(n)
    return mpmath.exp(log_value)


_EXACT_RATIO_MAX_N = 4096


def catalan_ratio(n):
    """``catalan(n) / 4**n`` as a float.

    Exact big-int division (correctly rounded) for small n; above that, log
    space at 96-bit precision, which stays well inside one rounding of the
    exact value.
    """
    n = _nonnegative_int(n, "n")
    if n <= _EXACT_RATIO_MAX_N:
        return catalan(n) / (1 << (2 * n))
    with mpmath.workprec(96):
        log_ratio = (
            mpmath.loggamma(2 * n + 1)
            - 2 * mpmath.loggamma(n + 1)
            - mpmath.log(n + 1)
            - 2 * n * mpmath.log(2)
        )
        return float(mpmath.exp(log_ratio))


def _nonnegative_int(value, name):
    if isinstance(value, bool) or int(value) != value:
        raise TypeError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < 0:
        raise ValueError(f"{name} must be nonnegative, got {value}")
    return value
