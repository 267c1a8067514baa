"""Dense linear programming by a primal-dual interior-point method.

Problems are held in the form::

    minimize    c @ x
    subject to  A_eq @ x == b_eq
                G @ x - h >= 0
                x >= 0

The solver is Mehrotra's predictor-corrector method started from an
infeasible point. Inequalities get slack variables ``s >= 0`` and the Newton
systems are reduced to the ``len(x)``-dimensional matrix
``G.T @ diag(mu / s) @ G + diag(z / x)``; an equality block (usually a single
row for the one-bit programs) is handled by a Schur complement. This keeps
the per-iteration cost at O(q N^2 + N^3) for ``q`` inequalities and ``N``
variables, which matters because ``q`` can be several times ``N``.

Termination:

* ``Optimal`` -- relative primal residuals, relative dual residual and
  relative duality gap all below tolerance, measured on the unscaled data.
* ``Infeasible`` -- the dual iterate has become a Farkas certificate:
  ``A_eq.T @ lam + G.T @ mu <= ~0`` with ``b_eq @ lam + h @ mu > 0``.
* ``Unbounded`` -- the primal iterate has become a recession direction with
  negative cost.
* ``NumericalFailure`` -- anything else (iteration cap, breakdown).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import linalg

from .errors import DimensionMismatchError, InvalidParameterError


class Status(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"
    NUMERICAL_FAILURE = "NumericalFailure"
    # used by the recovery layer, never by solve_lp
    NORM_UNRESOLVED = "NormUnresolved"
    DEGENERATE = "Degenerate"
    BELOW_HALF = "BelowHalf"
    SATURATED = "Saturated"


def _as_rows(M, N: int, name: str) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return M.reshape(0, N)
    if (M.ndim == 2 and M.shape[1] != N) or M.size % N:
        raise DimensionMismatchError(f"{name} does not have {N} columns (shape {M.shape})")
    return M.reshape(-1, N)


@dataclass
class LpProblem:
    c: np.ndarray
    A_eq: np.ndarray
    b_eq: np.ndarray
    G: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float).ravel()
        N = self.c.shape[0]
        if N == 0:
            raise DimensionMismatchError("an LP needs at least one variable")
        self.A_eq = _as_rows(self.A_eq, N, "A_eq")
        self.b_eq = np.asarray(self.b_eq, dtype=float).ravel()
        self.G = _as_rows(self.G, N, "G")
        self.h = np.asarray(self.h, dtype=float).ravel()
        if self.A_eq.shape[0] != self.b_eq.shape[0]:
            raise DimensionMismatchError("A_eq and b_eq disagree on the number of rows")
        if self.G.shape[0] != self.h.shape[0]:
            raise DimensionMismatchError("G and h disagree on the number of rows")

    @property
    def n_vars(self) -> int:
        return self.c.shape[0]

    @property
    def n_eq(self) -> int:
        return self.A_eq.shape[0]

    @property
    def n_ineq(self) -> int:
        return self.G.shape[0]

    def residuals(self, x) -> tuple[float, float]:
        """Relative (equality, inequality) violations of ``x``.

        Equality: ``max|A_eq x - b_eq| / (1 + max|b_eq|)``. Inequality: the
        largest violation of ``G x >= h`` or ``x >= 0``, divided by
        ``1 + max|h|``.
        """
        x = np.asarray(x, dtype=float)
        eq = _relinf(self.A_eq @ x - self.b_eq, self.b_eq)
        viol = 0.0
        if self.n_ineq:
            viol = max(viol, float(np.max(self.h - self.G @ x)))
        viol = max(viol, float(np.max(-x)))
        return eq, viol / (1.0 + _inf(self.h))


@dataclass
class LpSolution:
    x: np.ndarray
    objective: float
    status: Status
    iterations: int
    eq_residual: float = np.nan
    ineq_residual: float = np.nan
    dual_residual: float = np.nan
    gap: float = np.nan
    dual_objective: float = np.nan
    lam: np.ndarray = field(default=None, repr=False)
    mu: np.ndarray = field(default=None, repr=False)
    z: np.ndarray = field(default=None, repr=False)


def _inf(v) -> float:
    return float(np.max(np.abs(v))) if np.size(v) else 0.0


def _relinf(r, ref) -> float:
    return _inf(r) / (1.0 + _inf(ref))


def _max_step(v, dv) -> float:
    neg = dv < 0
    if not np.any(neg):
        return np.inf
    return float(np.min(-v[neg] / dv[neg]))


def _row_scale(M):
    norms = np.max(np.abs(M), axis=1) if M.size else np.zeros(M.shape[0])
    norms[norms == 0] = 1.0
    return 1.0 / norms


def solve_lp(p: LpProblem, feas_tol: float = 1e-8, opt_tol: float = 1e-8,
             max_iter: int = 200) -> LpSolution:
    """Solve ``p`` to relative feasibility ``feas_tol`` and relative gap ``opt_tol``."""
    if not (feas_tol > 0 and opt_tol > 0):
        raise InvalidParameterError("tolerances must be positive")
    c0, A0, b0, G0, h0 = p.c, p.A_eq, p.b_eq, p.G, p.h
    N, n_eq, q = p.n_vars, p.n_eq, p.n_ineq

    # equilibrate rows; the problem is unchanged, only the duals get rescaled
    ra, rg_ = _row_scale(A0), _row_scale(G0)
    A, b = A0 * ra[:, None], b0 * ra
    G, h = G0 * rg_[:, None], h0 * rg_
    c = c0

    x = np.ones(N)
    z = np.ones(N)
    lam = np.zeros(n_eq)
    s = np.maximum(G @ x - h, 1.0) if q else np.zeros(0)
    mu = np.ones(q)

    status = Status.NUMERICAL_FAILURE
    it = 0
    nc = N + q
    for it in range(1, max_iter + 1):
        Gx = G @ x
        rp = b - A @ x
        rg = h - Gx + s
        rd = c - A.T @ lam - G.T @ mu - z
        avg = (x @ z + s @ mu) / nc
        pobj = c @ x
        dobj = b @ lam + h @ mu

        # convergence on unscaled residuals
        eq_res = _relinf(rp / ra, b0) if n_eq else 0.0
        in_res = _relinf(rg / rg_, h0) if q else 0.0
        d_res = _relinf(rd, c0)
        gap = abs(pobj - dobj) / (1.0 + abs(pobj))
        if max(eq_res, in_res, d_res) <= feas_tol and gap <= opt_tol:
            status = Status.OPTIMAL
            break

        # Farkas certificate of primal infeasibility
        psi = dobj
        if psi > 0:
            v = A.T @ lam + G.T @ mu
            if np.max(v) <= 1e-9 * psi:
                status = Status.INFEASIBLE
                break
        # primal recession direction with negative cost
        xn = _inf(x)
        if xn > 1e8 and pobj < 0:
            d = x / xn
            cd = c @ d
            if (cd < 0 and _inf(A @ d) <= 1e-8 * -cd
                    and (q == 0 or np.min(G @ d) >= -1e-8 * -cd)):
                status = Status.UNBOUNDED
                break

        W = mu / s if q else np.zeros(0)
        Dx = z / x
        H = (G.T @ (W[:, None] * G) if q else np.zeros((N, N)))
        H[np.diag_indices(N)] += Dx
        try:
            fac = _factor(H)
        except linalg.LinAlgError:
            break
        if n_eq:
            HinvAt = linalg.cho_solve(fac, A.T)
            S = A @ HinvAt
            try:
                Sfac = _factor(S)
            except linalg.LinAlgError:
                break

        def newton(rcx, rcs):
            r1 = rd - rcx / x
            if q:
                r1 = r1 - G.T @ (rcs / s + W * rg)
            Hr1 = linalg.cho_solve(fac, r1)
            if n_eq:
                dlam = linalg.cho_solve(Sfac, rp + A @ Hr1)
                dx = HinvAt @ dlam - Hr1
            else:
                dlam = np.zeros(0)
                dx = -Hr1
            if q:
                Gdx = G @ dx
                ds = Gdx - rg
                dmu = rcs / s + W * (rg - Gdx)
            else:
                ds = dmu = np.zeros(0)
            dz = (rcx - z * dx) / x
            return dx, ds, dlam, dmu, dz

        # predictor
        dx, ds, dlam, dmu, dz = newton(-x * z, -s * mu)
        ap = min(1.0, _max_step(x, dx), _max_step(s, ds))
        ad = min(1.0, _max_step(z, dz), _max_step(mu, dmu))
        mu_aff = ((x + ap * dx) @ (z + ad * dz) + (s + ap * ds) @ (mu + ad * dmu)) / nc
        sigma = (mu_aff / avg) ** 3 if avg > 0 else 0.0

        # corrector
        dx, ds, dlam, dmu, dz = newton(sigma * avg - x * z - dx * dz,
                                       sigma * avg - s * mu - ds * dmu)
        eta = max(0.9, 1.0 - avg) if avg < 1 else 0.9
        eta = min(eta, 0.999)
        ap = min(1.0, eta * _max_step(x, dx), eta * _max_step(s, ds))
        ad = min(1.0, eta * _max_step(z, dz), eta * _max_step(mu, dmu))
        if not (np.isfinite(ap) and np.isfinite(ad)) or max(ap, ad) < 1e-14:
            break
        x = x + ap * dx
        s = s + ap * ds
        lam = lam + ad * dlam
        mu = mu + ad * dmu
        z = z + ad * dz

    eq_res, in_res = p.residuals(x)
    sol = LpSolution(
        x=x, objective=float(c0 @ x), status=status, iterations=it,
        eq_residual=eq_res, ineq_residual=in_res,
        dual_residual=_relinf(c0 - A.T @ lam - G.T @ mu - z, c0),
        gap=abs(float(c @ x - (b @ lam + h @ mu))) / (1.0 + abs(float(c @ x))),
        dual_objective=float(b @ lam + h @ mu),
        lam=lam * ra, mu=mu * rg_, z=z,
    )
    return sol


def _factor(M):
    try:
        return linalg.cho_factor(M, lower=False, check_finite=False)
    except linalg.LinAlgError:
        reg = 1e-14 * max(1.0, float(np.max(np.abs(np.diag(M)))))
        return linalg.cho_factor(M + reg * np.eye(M.shape[0]), lower=False, check_finite=False)


# --- plain-text exchange format ------------------------------------------------
#
#   # onebitcs-lp v1
#   vars <N>
#   obj <c_1> ... <c_N>
#   eq <a_1> ... <a_N> <rhs>      (one line per equality:   a @ x == rhs)
#   ge <g_1> ... <g_N> <rhs>      (one line per inequality: g @ x >= rhs)
#
# All variables are implicitly nonnegative. Tokens are whitespace separated
# and floats are written with repr() so files round-trip exactly.

def write_lp(p: LpProblem, path) -> None:
    fmt = lambda row: " ".join(repr(float(v)) for v in row)
    lines = ["# onebitcs-lp v1", f"vars {p.n_vars}", "obj " + fmt(p.c)]
    lines += [f"eq {fmt(row)} {float(rhs)!r}" for row, rhs in zip(p.A_eq, p.b_eq)]
    lines += [f"ge {fmt(row)} {float(rhs)!r}" for row, rhs in zip(p.G, p.h)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_lp(path) -> LpProblem:
    n_vars, c, eq, ge = None, None, [], []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, *vals = line.split()
        if key == "vars":
            n_vars = int(vals[0])
        elif key == "obj":
            c = [float(v) for v in vals]
        elif key in ("eq", "ge"):
            (eq if key == "eq" else ge).append([float(v) for v in vals])
        else:
            raise InvalidParameterError(f"{path}: unknown record {key!r}")
    if n_vars is None or c is None or len(c) != n_vars:
        raise InvalidParameterError(f"{path}: missing or inconsistent vars/obj records")
    for row in eq + ge:
        if len(row) != n_vars + 1:
            raise DimensionMismatchError(f"{path}: constraint row has {len(row) - 1} coefficients")
    E = np.array(eq).reshape(-1, n_vars + 1)
    F = np.array(ge).reshape(-1, n_vars + 1)
    return LpProblem(c=c, A_eq=E[:, :-1], b_eq=E[:, -1], G=F[:, :-1], h=F[:, -1])
