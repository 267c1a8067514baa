"""Sparse test signals, Gaussian measurement ensembles and one-bit quantization.

A measurement is ``y_i = sign(<a_i, x> + b_i)`` with ``sign(0) = +1``. The
shift vector ``b`` is one of

* :class:`GaussianDither` -- ``b_i ~ N(0, tau^2)`` i.i.d.,
* :class:`ConstantThreshold` -- ``b_i = -tau`` for every row, so the bits
  are ``sign(<a_i, x> - tau)``,
* :class:`NoShift` -- ``b = 0``, the classical scale-blind model.

All draws come from :mod:`onebitcs.rng` substreams of a single seed, so an
ensemble regenerated from the same ``(m, n, shift, seed)`` is bit-identical.
Because rows are drawn sequentially from one stream, the first ``k`` rows of
an ensemble with ``m >= k`` rows do not depend on ``m``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from . import rng
from .errors import DimensionMismatchError, InvalidParameterError


@dataclass(frozen=True)
class GaussianDither:
    tau: float


@dataclass(frozen=True)
class ConstantThreshold:
    tau: float


@dataclass(frozen=True)
class NoShift:
    pass


ShiftKind = Union[GaussianDither, ConstantThreshold, NoShift]


@dataclass(frozen=True)
class SparseSignal:
    """Ground-truth signal with its sparsity budget and norm annulus."""

    values: np.ndarray
    support: np.ndarray
    s: int
    r: float
    R: float

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    @property
    def direction(self) -> np.ndarray:
        return self.values / np.linalg.norm(self.values)


@dataclass(frozen=True)
class MeasurementEnsemble:
    A: np.ndarray
    shifts: np.ndarray
    shift_kind: ShiftKind
    seed: int

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def tau(self) -> float:
        return getattr(self.shift_kind, "tau", 0.0)


def generate_sparse_signal(n: int, s: int, r: float, R: float, seed: int) -> SparseSignal:
    """Draw an ``s``-sparse vector whose norm is uniform on ``[r, R]``.

    The support is a uniformly random ``s``-subset of ``range(n)``; the
    nonzero entries are i.i.d. standard normal, giving a uniformly random
    direction on that support, and are then rescaled to the drawn norm.
    """
    if not 0 < s <= n:
        raise InvalidParameterError(f"need 0 < s <= n, got s={s}, n={n}")
    if not 0 < r <= R:
        raise InvalidParameterError(f"need 0 < r <= R, got r={r}, R={R}")
    gen = rng.substream(seed, rng.SIGNAL)
    support = np.sort(gen.choice(n, size=s, replace=False))
    coeffs = gen.standard_normal(s)
    while not np.any(coeffs):  # probability zero, but never divide by 0
        coeffs = gen.standard_normal(s)
    target = gen.uniform(r, R) if R > r else float(r)
    values = np.zeros(n)
    values[support] = coeffs * (target / np.linalg.norm(coeffs))
    return SparseSignal(values=values, support=support, s=s, r=float(r), R=float(R))


def fixed_norm_signal(n: int, norm: float, seed: int) -> np.ndarray:
    """Dense vector with a uniformly random direction and prescribed norm."""
    if norm < 0:
        raise InvalidParameterError("norm must be nonnegative")
    g = rng.substream(seed, rng.SIGNAL).standard_normal(n)
    return g * (norm / np.linalg.norm(g))


def build_ensemble(m: int, n: int, shift_kind: ShiftKind, seed: int) -> MeasurementEnsemble:
    if m < 1 or n < 1:
        raise InvalidParameterError(f"need m >= 1 and n >= 1, got m={m}, n={n}")
    A = rng.substream(seed, rng.MATRIX).standard_normal((m, n))
    if isinstance(shift_kind, GaussianDither):
        if not shift_kind.tau > 0:
            raise InvalidParameterError(f"Gaussian dither needs tau > 0, got {shift_kind.tau}")
        shifts = shift_kind.tau * rng.substream(seed, rng.SHIFTS).standard_normal(m)
    elif isinstance(shift_kind, ConstantThreshold):
        if not shift_kind.tau > 0:
            raise InvalidParameterError(f"constant threshold needs tau > 0, got {shift_kind.tau}")
        shifts = np.full(m, -float(shift_kind.tau))
    elif isinstance(shift_kind, NoShift):
        shifts = np.zeros(m)
    else:
        raise InvalidParameterError(f"unknown shift kind {shift_kind!r}")
    return MeasurementEnsemble(A=A, shifts=shifts, shift_kind=shift_kind, seed=int(seed))


def quantize(ensemble: MeasurementEnsemble, x) -> np.ndarray:
    """Return the ``+1/-1`` vector ``sign(A x + b)`` with ``sign(0) = +1``."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != ensemble.n:
        raise DimensionMismatchError(
            f"signal has shape {x.shape}, ensemble expects length {ensemble.n}")
    return np.where(ensemble.A @ x + ensemble.shifts >= 0, 1, -1).astype(np.int8)


# --- plain-text export -------------------------------------------------------
#
# Ensemble CSV layout (UTF-8, '\n' line endings):
#
#   # onebitcs-ensemble v1
#   # m=<int> n=<int> shift=<gaussian|constant|none> tau=<float> seed=<int>
#   a_11,a_12,...,a_1n,b_1
#   ...
#   a_m1,a_m2,...,a_mn,b_m
#
# One row per measurement, row-major A followed by that row's shift. Floats are
# written with repr() so they round-trip exactly.

_KIND_NAMES = {GaussianDither: "gaussian", ConstantThreshold: "constant", NoShift: "none"}


def write_ensemble_csv(ensemble: MeasurementEnsemble, path) -> None:
    kind = _KIND_NAMES[type(ensemble.shift_kind)]
    lines = [
        "# onebitcs-ensemble v1",
        f"# m={ensemble.m} n={ensemble.n} shift={kind} tau={ensemble.tau!r} seed={ensemble.seed}",
    ]
    for row, b in zip(ensemble.A, ensemble.shifts):
        lines.append(",".join(repr(float(v)) for v in row) + "," + repr(float(b)))
    Path(path).write_text("\n".join(lines) + "\n")


def read_ensemble_csv(path) -> MeasurementEnsemble:
    text = Path(path).read_text().splitlines()
    if not text or text[0].strip() != "# onebitcs-ensemble v1":
        raise InvalidParameterError(f"{path}: not an ensemble file")
    meta = dict(tok.split("=", 1) for tok in text[1].lstrip("# ").split())
    m, n = int(meta["m"]), int(meta["n"])
    tau = float(meta["tau"])
    kind = {"gaussian": GaussianDither, "constant": ConstantThreshold}.get(meta["shift"])
    shift_kind = kind(tau) if kind else NoShift()
    data = np.array([[float(v) for v in line.split(",")] for line in text[2:] if line.strip()])
    if data.shape != (m, n + 1):
        raise DimensionMismatchError(f"{path}: expected {m}x{n + 1} values, found {data.shape}")
    return MeasurementEnsemble(A=data[:, :n].copy(), shifts=data[:, n].copy(),
                               shift_kind=shift_kind, seed=int(meta["seed"]))

