"""Sign-consistent l1 minimization and its norm-aware augmented variant.

The direction program minimizes ``|x'|_1`` over vectors whose measurements
have the observed signs and whose absolute measurements sum to ``m``. Sign
consistency turns every ``|<a_i, x'>|`` into ``y_i <a_i, x'>``, so with the
split ``x' = x_plus - x_minus`` the program is the LP::

    minimize    sum(x_plus + x_minus)
    subject to  y_i <a_i, x_plus - x_minus>  >= 0     (i = 1..m)
                sum_i y_i <a_i, x_plus - x_minus> == m
                x_plus, x_minus >= 0

For shifted bits ``y_i = sign(<a_i, x> + b_i)`` with ``b_i ~ N(0, tau^2)``,
the augmented program runs the same LP over ``(z, u)`` with rows
``(a_i, b_i / tau)``. Its optimum ``(x#, t#)`` is a multiple of an estimate
of ``(x, tau)``, so ``tau * x# / t#`` estimates ``x`` including its norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .edf import NormEstimate
from .errors import DimensionMismatchError, InvalidParameterError
from .lp import LpProblem, LpSolution, Status, solve_lp
from .measurement import GaussianDither, MeasurementEnsemble

FEAS_TOL = 1e-8
OPT_TOL = 1e-8
T_TOL = 1e-6


@dataclass
class RecoveryResult:
    """Output of the recovery routines.

    ``estimate`` is ``None`` whenever the status withholds it (solver failure,
    ``NormUnresolved``, ``Degenerate``, ``BelowHalf``).
    """

    x_sharp: Optional[np.ndarray]
    t_sharp: Optional[float]
    estimate: Optional[np.ndarray]
    objective_value: float
    eq_residual: float
    ineq_residual: float
    status: Status
    lp: Optional[LpSolution] = None
    norm: Optional[NormEstimate] = None

    @property
    def ok(self) -> bool:
        return self.estimate is not None


def _check_signs(A, y):
    A = np.asarray(A, dtype=float)
    y = np.asarray(y)
    if A.ndim != 2 or y.ndim != 1 or A.shape[0] != y.shape[0]:
        raise DimensionMismatchError(f"A has shape {A.shape}, y has shape {y.shape}")
    if A.shape[0] < 1 or A.shape[1] < 1:
        raise DimensionMismatchError("need at least one measurement and one unknown")
    if not np.all(np.abs(y) == 1):
        raise InvalidParameterError("y must contain only +1 and -1")
    return A, y.astype(float)


def formulate_pv(A, y) -> LpProblem:
    """LP over ``(x_plus, x_minus)`` for the sign-consistent l1 program."""
    A, y = _check_signs(A, y)
    m, n = A.shape
    B = y[:, None] * A
    total = B.sum(axis=0)
    return LpProblem(
        c=np.ones(2 * n),
        A_eq=np.concatenate([total, -total])[None, :],
        b_eq=[float(m)],
        G=np.hstack([B, -B]),
        h=np.zeros(m),
    )


def formulate_pv_augmented(A, b, tau: float, y) -> LpProblem:
    """LP over ``(z_plus, u_plus, z_minus, u_minus)`` for the augmented program.

    Row ``i`` constrains ``y_i (<a_i, z> + (u / tau) b_i) >= 0``. The variable
    layout matches :func:`formulate_pv` applied to ``[A | b / tau]``.
    """
    if not tau > 0:
        raise InvalidParameterError(f"tau must be positive, got {tau!r}")
    A, y = _check_signs(A, y)
    b = np.asarray(b, dtype=float).ravel()
    m, n = A.shape
    if b.shape[0] != m:
        raise DimensionMismatchError(f"{m} measurements but {b.shape[0]} shifts")
    signed_a = y[:, None] * A
    signed_b = y * b / tau
    G = np.empty((m, 2 * (n + 1)))
    G[:, :n] = signed_a
    G[:, n] = signed_b
    G[:, n + 1:2 * n + 1] = -signed_a
    G[:, 2 * n + 1] = -signed_b
    return LpProblem(c=np.ones(2 * (n + 1)), A_eq=G.sum(axis=0)[None, :],
                     b_eq=[float(m)], G=G, h=np.zeros(m))


def _unsplit(v: np.ndarray) -> np.ndarray:
    half = v.shape[0] // 2
    return v[:half] - v[half:]


def recover_augmented(ensemble: MeasurementEnsemble, y, *, feas_tol: float = FEAS_TOL,
                      opt_tol: float = OPT_TOL, t_tol: float = T_TOL) -> RecoveryResult:
    """Estimate ``x`` (direction and norm) from Gaussian-dithered bits."""
    if not isinstance(ensemble.shift_kind, GaussianDither):
        raise InvalidParameterError("augmented recovery needs a GaussianDither ensemble")
    tau = ensemble.tau
    problem = formulate_pv_augmented(ensemble.A, ensemble.shifts, tau, y)
    sol = solve_lp(problem, feas_tol=feas_tol, opt_tol=opt_tol)
    w = _unsplit(sol.x)
    x_sharp, t_sharp = w[:-1], float(w[-1])
    status, estimate = sol.status, None
    if status is Status.OPTIMAL:
        if t_sharp > t_tol:
            estimate = tau * x_sharp / t_sharp
        else:
            status = Status.NORM_UNRESOLVED
    return RecoveryResult(x_sharp=x_sharp, t_sharp=t_sharp, estimate=estimate,
                          objective_value=sol.objective, eq_residual=sol.eq_residual,
                          ineq_residual=sol.ineq_residual, status=status, lp=sol)


def recover_direction(ensemble: MeasurementEnsemble, y, *, feas_tol: float = FEAS_TOL,
                      opt_tol: float = OPT_TOL, t_tol: float = T_TOL) -> RecoveryResult:
    """Unit-norm direction estimate from unshifted bits ``sign(<a_i, x>)``."""
    if np.any(ensemble.shifts != 0):
        raise InvalidParameterError("direction recovery needs an ensemble with zero shifts")
    sol = solve_lp(formulate_pv(ensemble.A, y), feas_tol=feas_tol, opt_tol=opt_tol)
    x_sharp = _unsplit(sol.x)
    status, estimate = sol.status, None
    if status is Status.OPTIMAL:
        nrm = float(np.linalg.norm(x_sharp))
        if nrm > t_tol:
            estimate = x_sharp / nrm
        else:
            status = Status.DEGENERATE
    return RecoveryResult(x_sharp=x_sharp, t_sharp=None, estimate=estimate,
                          objective_value=sol.objective, eq_residual=sol.eq_residual,
                          ineq_residual=sol.ineq_residual, status=status, lp=sol)


def sample_size_direction(delta: float, n: int, s: int, C: float = 1.0) -> int:
    """Measurements for direction error ``delta``: ``C delta^-5 s log^2(2n/s)``.

    ``C`` is an unspecified universal constant; 1 is a placeholder.
    """
    if not 0 < delta or not 0 < s <= n or not C > 0:
        raise InvalidParameterError("need delta > 0, 0 < s <= n and C > 0")
    return max(1, math.floor(C * delta ** -5 * s * math.log(2 * n / s) ** 2) + 1)


def sample_size_augmented(R: float, tau: float, delta: float, n: int, s: int,
                          C: float = 1.0) -> int:
    """Measurements for the augmented program at accuracy parameter ``delta``.

    ``m = ceil(C (sqrt(R^2 + tau^2) / delta)^5 s log^2(2n/s))`` with
    ``delta < min(1, tau/2)``; see :func:`augmented_error_bound` for the
    resulting error. ``C`` is an unspecified universal constant.
    """
    if not (R > 0 and tau > 0 and C > 0 and 0 < s <= n):
        raise InvalidParameterError("need R, tau, C > 0 and 0 < s <= n")
    if not 0 < delta < min(1.0, tau / 2):
        raise InvalidParameterError(f"need 0 < delta < min(1, tau/2) = {min(1.0, tau / 2)}")
    return math.ceil(C * (math.hypot(R, tau) / delta) ** 5 * s * math.log(2 * n / s) ** 2)


def augmented_error_bound(R: float, tau: float, delta: float) -> float:
    """Error guarantee ``4 sqrt(R^2 + tau^2) delta / tau``; equals ``4 sqrt(2) delta`` at ``tau = R``."""
    return 4.0 * math.hypot(R, tau) * delta / tau
