"""Gaussian error function, its inverse, and the reciprocal-inverse map ``h``.

``erf`` and ``erfc`` delegate to the C library through :mod:`math`. The
inverse is computed here: a rational starting guess followed by Newton steps
on ``erf(w) = u`` with derivative ``(sqrt(pi)/2) exp(w^2)``, so that
``erf(erfinv(u))`` reproduces ``u`` to a few ulps. All scalar functions also
accept array input and then map elementwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvalidParameterError

SQRT_PI = math.sqrt(math.pi)
SQRT2 = math.sqrt(2.0)

# Upper end of the interval on which |h'| is decreasing: (1 + erf(1)) / 2.
H_UPPER = 0.5 * (1.0 + math.erf(1.0))


def _elementwise(fn):
    vec = np.vectorize(fn, otypes=[float])

    def wrapper(x, *args):
        if np.ndim(x) == 0:
            return fn(float(x), *args)
        return vec(np.asarray(x, dtype=float), *args)

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_elementwise
def erf(x: float) -> float:
    """``(2/sqrt(pi)) * integral_0^x exp(-t^2) dt``."""
    return math.erf(x)


@_elementwise
def erfc(x: float) -> float:
    return math.erfc(x)


def _erfinv_guess(u: float) -> float:
    # M. Giles, "Approximating the erfinv function" (single-precision branch);
    # relative error ~1e-7, which two Newton steps take to full precision.
    w = -math.log((1.0 - u) * (1.0 + u))
    if w < 5.0:
        w -= 2.5
        p = 2.81022636e-08
        for c in (3.43273939e-07, -3.5233877e-06, -4.39150654e-06, 0.00021858087,
                  -0.00125372503, -0.00417768164, 0.246640727, 1.50140941):
            p = c + p * w
    else:
        w = math.sqrt(w) - 3.0
        p = -0.000200214257
        for c in (0.000100950558, 0.00134934322, -0.00367342844, 0.00573950773,
                  -0.0076224613, 0.00943887047, 1.00167406, 2.83297682):
            p = c + p * w
    return p * u


@_elementwise
def erfinv(u: float) -> float:
    """Inverse of :func:`erf` on ``(-1, 1)``.

    Raises :class:`DomainError` for ``|u| >= 1``; callers that want the
    limiting value at the endpoints must handle them explicitly.
    """
    if not -1.0 < u < 1.0:
        raise DomainError(f"erfinv is defined on (-1, 1), got {u!r}")
    if u == 0.0:
        return 0.0
    a = abs(u)
    w = _erfinv_guess(a)
    # Near |u| = 1 the residual erf(w) - a cancels; 1 - a is exact there
    # (Sterbenz) and erfc keeps full relative accuracy.
    tail = a > 0.5
    one_minus_a = 1.0 - a
    for _ in range(6):
        resid = (one_minus_a - math.erfc(w)) if tail else (math.erf(w) - a)
        step = resid * (0.5 * SQRT_PI) * math.exp(w * w)
        w -= step
        if abs(step) <= 2e-16 * w:
            break
    return math.copysign(w, u)


def _check_h_domain(u: float) -> None:
    if not 0.5 < u < 1.0:
        raise DomainError(f"h is defined on (1/2, 1), got {u!r}")


@_elementwise
def h(u: float) -> float:
    """``1 / erfinv(2u - 1)`` for ``u`` in ``(1/2, 1)``."""
    _check_h_domain(u)
    return 1.0 / erfinv(2.0 * u - 1.0)


@_elementwise
def h_prime(u: float) -> float:
    """Derivative of :func:`h`: ``-sqrt(pi) exp(w^2) / w^2`` with ``w = erfinv(2u - 1)``."""
    _check_h_domain(u)
    w = erfinv(2.0 * u - 1.0)
    return -SQRT_PI * math.exp(w * w) / (w * w)


def gaussian_cdf_at_threshold(tau, sigma: float):
    """CDF of ``N(0, sigma^2)`` at ``tau``, i.e. ``(1 + erf(tau / (sigma sqrt 2))) / 2``."""
    if not sigma > 0:
        raise InvalidParameterError(f"sigma must be positive, got {sigma!r}")
    # erfc(-t) form keeps relative accuracy in the lower tail
    return 0.5 * erfc(-np.asarray(tau, dtype=float) / (sigma * SQRT2))


def standard_normal_cdf(x):
    return gaussian_cdf_at_threshold(x, 1.0)


def erf_increment_bounds(a: float, b: float) -> tuple[float, float]:
    """Secant bounds on ``erf(b) - erf(a)`` for ``0 <= a <= b``.

    Since erf' = (2/sqrt(pi)) exp(-t^2) is decreasing on ``[0, inf)``, the
    increment lies between ``(b-a) erf'(b)`` and ``(b-a) erf'(a)``.
    """
    if not 0 <= a <= b:
        raise InvalidParameterError(f"need 0 <= a <= b, got a={a}, b={b}")
    scale = (b - a) * 2.0 / SQRT_PI
    return scale * math.exp(-b * b), scale * math.exp(-a * a)


@dataclass
class LemmaCheck:
    """Verdict of an executable inequality check.

    ``holds`` is only meaningful when ``preconditions_violated`` is False.
    """

    holds: bool
    preconditions_violated: bool
    lhs: float = math.nan
    bound: float = math.nan
    violations: list[str] = field(default_factory=list)


def check_lemma_sincos(x1, t1: float, x2, t2: float, alpha: float, eta: float,
                       *, tol: float = 1e-12) -> LemmaCheck:
    """Check the quotient-perturbation inequality for points of the unit ball.

    Hypotheses: all scalars positive, ``t1 >= alpha > eta``,
    ``|x1|^2 + t1^2 = 1``, ``|x2|^2 + t2^2 <= 1`` and
    ``|x1 - x2|^2 + (t1 - t2)^2 <= eta^2``. Conclusion:
    ``|x1/t1 - x2/t2|^2 <= 4 eta^2 / (alpha^2 (alpha - eta)^2)``.
    Equalities and upper bounds in the hypotheses are tested with absolute
    slack ``tol``; the conclusion with relative slack ``tol``.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    bad = []
    if min(t1, t2, alpha, eta) <= 0:
        bad.append("scalars must be positive")
    if not t1 >= alpha > eta:
        bad.append("need t1 >= alpha > eta")
    if abs(x1 @ x1 + t1 * t1 - 1.0) > tol:
        bad.append("|x1|^2 + t1^2 != 1")
    if x2 @ x2 + t2 * t2 > 1.0 + tol:
        bad.append("|x2|^2 + t2^2 > 1")
    d = x1 - x2
    if d @ d + (t1 - t2) ** 2 > eta * eta + tol:
        bad.append("|(x1,t1) - (x2,t2)| > eta")
    if bad:
        return LemmaCheck(holds=False, preconditions_violated=True, violations=bad)
    q = x1 / t1 - x2 / t2
    lhs = float(q @ q)
    bound = 4.0 * eta * eta / (alpha * alpha * (alpha - eta) ** 2)
    return LemmaCheck(holds=lhs <= bound * (1.0 + tol), preconditions_violated=False,
                      lhs=lhs, bound=bound)


def check_lemma_h(a: float, b: float, eta: float, *, tol: float = 1e-12) -> LemmaCheck:
    """Check ``|h(a) - h(b)| <= |h'(1/2 + eta)| |b - a|`` on ``[1/2 + eta, H_UPPER)``."""
    bad = []
    if not eta > 0:
        bad.append("eta must be positive")
    lo = 0.5 + eta
    for name, v in (("a", a), ("b", b)):
        if not lo <= v < H_UPPER:
            bad.append(f"{name} outside [1/2 + eta, (1 + erf(1))/2)")
    if bad:
        return LemmaCheck(holds=False, preconditions_violated=True, violations=bad)
    lhs = abs(h(a) - h(b))
    bound = abs(h_prime(lo)) * abs(b - a)
    return LemmaCheck(holds=lhs <= bound * (1.0 + tol) + 1e-15, preconditions_violated=False,
                      lhs=lhs, bound=bound)
