"""Norm estimation from constant-threshold one-bit measurements.

With ``y_i = sign(<a_i, x> - tau)`` and Gaussian ``a_i``, each inner product
is ``N(0, |x|^2)``, so the fraction of ``-1`` bits estimates the Gaussian CDF
at ``tau``. Inverting that CDF gives the estimator::

    Lambda = tau / (sqrt(2) * erfinv(2 F_m - 1))

This module also carries the DKW tail bound and the sample-size formulas that
go with the estimator.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import EmptyMeasurementError, InvalidParameterError
from .special import SQRT2, erfinv

FOUR_PI_E2 = 4.0 * math.pi * math.e ** 2
# Largest admissible delta / R for the fixed-signal guarantee.
FIXED_SIGNAL_DELTA_RATIO = 2.0 * math.sqrt(math.e) / 5.0


class NormStatus(str, enum.Enum):
    OK = "Ok"
    BELOW_HALF = "BelowHalf"
    SATURATED = "Saturated"


@dataclass(frozen=True)
class NormEstimate:
    """Result of :func:`estimate_norm`.

    ``lam`` is ``None`` when ``status`` is ``BelowHalf``: with ``F_m <= 1/2``
    the inversion would give a negative or infinite norm. ``Saturated``
    (every bit is ``-1``) maps to ``lam = 0``, the limit of the estimator as
    ``F_m -> 1``.
    """

    lam: Optional[float]
    f_m: float
    tau: float
    m: int
    status: NormStatus


def empirical_cdf(y) -> float:
    """Fraction of ``-1`` entries in the sign vector ``y``."""
    y = np.asarray(y)
    if y.size == 0:
        raise EmptyMeasurementError("empirical CDF of an empty measurement vector")
    return int(np.count_nonzero(y < 0)) / y.size


def norm_from_cdf(f_m: float, tau: float, m: int = 0) -> NormEstimate:
    if not tau > 0:
        raise InvalidParameterError(f"tau must be positive, got {tau!r}")
    if not 0.0 <= f_m <= 1.0:
        raise InvalidParameterError(f"f_m must lie in [0, 1], got {f_m!r}")
    if f_m <= 0.5:
        return NormEstimate(None, f_m, tau, m, NormStatus.BELOW_HALF)
    if f_m == 1.0:
        return NormEstimate(0.0, f_m, tau, m, NormStatus.SATURATED)
    lam = tau / (SQRT2 * erfinv(2.0 * f_m - 1.0))
    return NormEstimate(lam, f_m, tau, m, NormStatus.OK)


def estimate_norm(y, tau: float) -> NormEstimate:
    """Estimate ``|x|_2`` from bits ``sign(<a_i, x> - tau)``."""
    y = np.asarray(y)
    return norm_from_cdf(empirical_cdf(y), tau, m=y.size)


def dkw_failure_probability(m: int, gamma: float) -> float:
    """DKW bound ``2 exp(-2 m gamma^2)`` on ``P(sup |F_m - F| > gamma)``, clamped to 1."""
    if m < 1 or not gamma > 0:
        raise InvalidParameterError(f"need m >= 1 and gamma > 0, got m={m}, gamma={gamma}")
    return min(1.0, 2.0 * math.exp(-2.0 * m * gamma * gamma))


def sup_deviation(samples, cdf) -> float:
    """Kolmogorov distance ``sup_t |F_m(t) - F(t)|`` between a sample and a CDF.

    ``cdf`` must accept arrays. The supremum is attained at a sample point,
    approached either from the left or from the right.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    m = x.size
    if m == 0:
        raise EmptyMeasurementError("empty sample")
    f = np.asarray(cdf(x), dtype=float)
    k = np.arange(1, m + 1)
    return float(max(np.max(k / m - f), np.max(f - (k - 1) / m)))


def _check_annulus(r: float, R: float) -> None:
    if not 0 < r <= R:
        raise InvalidParameterError(f"need 0 < r <= R, got r={r}, R={R}")


def sample_size_fixed_signal(r: float, R: float, delta: float, epsilon: float) -> int:
    """Measurements for ``|Lambda - |x|| <= delta`` w.p. ``1 - epsilon`` at ``tau = r``.

    ``m = ceil(4 pi e^2 (R^4 / r^2) delta^-2 log(2 / epsilon))``, valid for
    ``0 < delta < (2 sqrt(e) / 5) R`` and any fixed ``x`` with
    ``r <= |x| <= R``.
    """
    _check_annulus(r, R)
    if not 0 < delta < FIXED_SIGNAL_DELTA_RATIO * R:
        raise InvalidParameterError(
            f"need 0 < delta < (2 sqrt(e)/5) R = {FIXED_SIGNAL_DELTA_RATIO * R:.6g}, got {delta}")
    if not 0 < epsilon < 1:
        raise InvalidParameterError(f"need 0 < epsilon < 1, got {epsilon}")
    return math.ceil(FOUR_PI_E2 * R ** 4 / r ** 2 / delta ** 2 * math.log(2.0 / epsilon))


def sample_size_uniform(r: float, R: float, delta: float, n: int, s: int, C1: float = 1.0) -> int:
    """Measurements for the uniform guarantee over ``s``-sparse ``x`` (``tau = 3r/5``).

    ``m = ceil(C1 (R^4 / r^2) delta^-2 s log(n R^2 / (s delta r)))``. The
    absolute constant ``C1`` is not given explicitly by the theory; the
    default of 1 makes this a planning figure, not a guarantee. The matching
    success probability is ``1 - 14 exp(-delta^2 r^2 m / (C1 R^4))``.
    """
    _check_annulus(r, R)
    if not 0 < delta <= R:
        raise InvalidParameterError(f"need 0 < delta <= R, got {delta}")
    if not 0 < s <= n:
        raise InvalidParameterError(f"need 0 < s <= n, got s={s}, n={n}")
    if not C1 > 0:
        raise InvalidParameterError("C1 must be positive")
    log_term = math.log(n * R ** 2 / (s * delta * r))
    return max(1, math.ceil(C1 * R ** 4 / r ** 2 / delta ** 2 * s * log_term))
