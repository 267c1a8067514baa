import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from onebitcs import special
from onebitcs.errors import DomainError, InvalidParameterError
from oracles import erf_quad, erfinv_bisect


@pytest.mark.parametrize("x", [-6.0, -2.5, -0.3, 0.0, 1e-8, 0.5, 1.0, 3.7, 6.0])
def test_erf_matches_quadrature(x):
    assert abs(special.erf(x) - erf_quad(x)) <= 1e-15


def test_erf_vectorizes():
    xs = np.linspace(-2, 2, 7)
    out = special.erf(xs)
    assert out.shape == xs.shape
    np.testing.assert_array_equal(out, [math.erf(v) for v in xs])


def test_erfinv_known_values():
    assert special.erfinv(0.0) == 0.0
    assert special.erfinv(0.5) == pytest.approx(0.4769362762044699, abs=1e-15)
    assert special.erfinv(-0.5) == -special.erfinv(0.5)


@pytest.mark.parametrize("u", [-0.999999, -0.9, -0.3, 1e-12, 0.1, 0.7, 0.99, 0.999999999])
def test_erfinv_matches_bisection(u):
    ref = erfinv_bisect(u)
    assert abs(special.erfinv(u) - ref) <= 1e-13 * max(1.0, abs(ref))


@pytest.mark.parametrize("u", [1.0, -1.0, 1.5, float("nan")])
def test_erfinv_domain(u):
    with pytest.raises(DomainError):
        special.erfinv(u)


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=-5.5, max_value=5.5, allow_nan=False))
def test_erfinv_inverts_erf(x):
    u = special.erf(x)
    if abs(u) >= 1.0:
        return
    # conditioning of the inverse grows like exp(x^2); compare in u instead
    assert abs(special.erf(special.erfinv(u)) - u) <= 4e-16


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=-0.999999, max_value=0.999999, allow_nan=False))
def test_erfinv_odd_and_monotone(u):
    assert special.erfinv(-u) == -special.erfinv(u)
    assert special.erfinv(min(u + 1e-6, 0.9999995)) >= special.erfinv(u)


def test_h_values():
    # 1 / erfinv(0.5)
    assert special.h(0.75) == pytest.approx(2.096716165015061, rel=1e-14)
    assert special.h(special.H_UPPER) == pytest.approx(1.0, rel=1e-13)


def test_h_prime_at_upper_end():
    # at w = 1 the derivative is -sqrt(pi) e
    assert special.h_prime(special.H_UPPER) == pytest.approx(-math.sqrt(math.pi) * math.e, rel=1e-12)


@pytest.mark.parametrize("u", [0.5, 1.0, 0.2, 1.3])
def test_h_domain(u):
    with pytest.raises(DomainError):
        special.h(u)
    with pytest.raises(DomainError):
        special.h_prime(u)


@pytest.mark.parametrize("u", [0.51, 0.6, 0.75, 0.84, 0.95])
def test_h_prime_finite_difference(u):
    e = 1e-6
    fd = (special.h(u + e) - special.h(u - e)) / (2 * e)
    assert special.h_prime(u) == pytest.approx(fd, rel=1e-6)


def test_gaussian_cdf():
    assert special.gaussian_cdf_at_threshold(0.0, 3.0) == 0.5
    assert special.gaussian_cdf_at_threshold(10.0, 15.0) == pytest.approx(
        0.5 * (1 + math.erf(10 / (15 * math.sqrt(2)))), rel=1e-15)
    # lower tail keeps relative accuracy
    assert special.standard_normal_cdf(-30.0) == pytest.approx(4.906713927148187e-198, rel=1e-12)
    with pytest.raises(InvalidParameterError):
        special.gaussian_cdf_at_threshold(1.0, 0.0)


@settings(max_examples=300, deadline=None)
@given(st.floats(0, 5), st.floats(0, 5))
def test_erf_increment_bounds(a, b):
    a, b = min(a, b), max(a, b)
    lo, hi = special.erf_increment_bounds(a, b)
    inc = math.erf(b) - math.erf(a)
    assert lo * (1 - 1e-12) - 1e-16 <= inc <= hi * (1 + 1e-12) + 1e-16


def test_erf_increment_bounds_domain():
    with pytest.raises(InvalidParameterError):
        special.erf_increment_bounds(1.0, 0.5)
    with pytest.raises(InvalidParameterError):
        special.erf_increment_bounds(-1.0, 0.5)


def test_sincos_check_detects_preconditions():
    x1 = np.array([0.6])
    res = special.check_lemma_sincos(x1, 0.8, x1, 0.8, alpha=0.9, eta=0.1)
    assert res.preconditions_violated and "need t1 >= alpha > eta" in res.violations
    res = special.check_lemma_sincos(np.array([0.0]), 0.5, np.array([0.0]), 0.5, 0.4, 0.1)
    assert res.preconditions_violated  # not on the unit sphere


def test_sincos_check_holds_at_equal_points():
    x = np.array([0.6, 0.0])
    res = special.check_lemma_sincos(x, 0.8, x, 0.8, alpha=0.5, eta=0.1)
    assert res.holds and not res.preconditions_violated and res.lhs == 0.0


def test_sincos_bound_is_not_vacuous():
    # perturb along the t axis: the quotient moves, the bound still holds
    x1 = np.array([0.6])
    res = special.check_lemma_sincos(x1, 0.8, x1, 0.75, alpha=0.7, eta=0.05)
    assert res.holds and 0 < res.lhs < res.bound


def test_h_check():
    res = special.check_lemma_h(0.6, 0.7, 0.05)
    assert res.holds and res.lhs < res.bound
    assert special.check_lemma_h(0.52, 0.7, 0.05).preconditions_violated
    assert special.check_lemma_h(0.6, 0.93, 0.05).preconditions_violated
