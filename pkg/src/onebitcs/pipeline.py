"""Two-batch estimator: EDF norm from one batch, l1 direction from the other.

The measurement budget is split into ``m1`` constant-threshold bits (used
only for the norm) and ``m2`` unshifted bits (used only for the direction).
The batches use disjoint random vectors, drawn from independent substreams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .edf import FOUR_PI_E2, NormStatus, estimate_norm
from .errors import InvalidParameterError
from .lp import Status
from .measurement import ConstantThreshold, NoShift, SparseSignal, build_ensemble, quantize
from .recovery import FEAS_TOL, OPT_TOL, T_TOL, RecoveryResult, recover_direction

NORM_BATCH = 0
DIRECTION_BATCH = 1


@dataclass(frozen=True)
class SplitPlan:
    m1: int  # constant-threshold bits for the norm
    m2: int  # zero-shift bits for the direction

    def __post_init__(self):
        if self.m1 < 1 or self.m2 < 1:
            raise InvalidParameterError(f"both batches need at least one measurement: {self}")

    @property
    def m(self) -> int:
        return self.m1 + self.m2

    @classmethod
    def even(cls, m: int) -> "SplitPlan":
        """Split a fixed budget in half (``m1 = m // 2``)."""
        return cls(m // 2, m - m // 2)


def plan_split(r: float, R: float, delta: float, epsilon: float, n: int, s: int,
               C0: float = 1.0, C: float = 1.0) -> SplitPlan:
    """Batch sizes for ``|Lambda x# - x| <= delta`` with probability ``1 - epsilon``.

    norm batch:      ``4 pi e^2 (R^4 / r^2) delta^-2 log(4 / epsilon)``
    direction batch: ``C0 delta^-5 R^5 (s log^2(n/s) + log(C / epsilon))``

    ``C0`` and ``C`` are unspecified absolute constants and default to 1.
    """
    if not 0 < r <= R:
        raise InvalidParameterError(f"need 0 < r <= R, got r={r}, R={R}")
    if not (delta > 0 and 0 < epsilon < 1 and 0 < s <= n and C0 > 0 and C > 0):
        raise InvalidParameterError("need delta > 0, 0 < epsilon < 1, 0 < s <= n, C0, C > 0")
    m1 = math.ceil(FOUR_PI_E2 * R ** 4 / r ** 2 / delta ** 2 * math.log(4.0 / epsilon))
    direction = C0 * delta ** -5 * R ** 5 * (s * math.log(n / s) ** 2 + math.log(C / epsilon))
    return SplitPlan(m1=max(1, m1), m2=max(1, math.ceil(direction)))


def combined_recover(x_signal, plan: SplitPlan, tau: float, seed: int, *,
                     feas_tol: float = FEAS_TOL, opt_tol: float = OPT_TOL,
                     t_tol: float = T_TOL) -> RecoveryResult:
    """Measure ``x_signal`` with both batches and return ``Lambda * x#``.

    ``x_signal`` may be a :class:`SparseSignal` or a plain vector. The
    returned result's ``x_sharp`` is the unit direction estimate and
    ``norm`` holds the :class:`NormEstimate`. A ``BelowHalf`` norm withholds
    the estimate; a ``Saturated`` one yields the zero vector.
    """
    x = x_signal.values if isinstance(x_signal, SparseSignal) else np.asarray(x_signal, float)
    n = x.shape[0]
    norm_ens = build_ensemble(plan.m1, n, ConstantThreshold(tau), rng.derive_seed(seed, NORM_BATCH))
    norm = estimate_norm(quantize(norm_ens, x), tau)

    dir_ens = build_ensemble(plan.m2, n, NoShift(), rng.derive_seed(seed, DIRECTION_BATCH))
    direction = recover_direction(dir_ens, quantize(dir_ens, x), feas_tol=feas_tol,
                                  opt_tol=opt_tol, t_tol=t_tol)

    status, estimate = direction.status, None
    if direction.estimate is not None:
        if norm.status is NormStatus.BELOW_HALF:
            status = Status.BELOW_HALF
        else:
            estimate = norm.lam * direction.estimate
            if norm.status is NormStatus.SATURATED:
                status = Status.SATURATED
    return RecoveryResult(x_sharp=direction.estimate, t_sharp=None, estimate=estimate,
                          objective_value=direction.objective_value,
                          eq_residual=direction.eq_residual,
                          ineq_residual=direction.ineq_residual,
                          status=status, lp=direction.lp, norm=norm)
