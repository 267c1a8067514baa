"""Monte Carlo sweeps over the measurement count and over the threshold.

A sweep runs every method in ``config.methods`` on ``config.trials`` random
instances at each grid point and records one :class:`TrialRow` per
``(method, grid point, trial)``. Methods:

``PVaug``
    Gaussian-dithered bits ``b_i ~ N(0, tau^2)``, augmented LP, estimate
    ``tau x# / t#``. Reports norm and signal error.
``EDF``
    Constant threshold ``tau`` on all ``m`` bits, norm only. The signal
    error column is left empty.
``Combined``
    ``m/2`` constant-threshold bits for the norm and ``m/2`` unshifted bits
    for the direction, estimate ``Lambda x#``.

With ``paired=True`` (the default) a trial uses the same signal, the same
matrix and the same dither draw at every grid point. Because rows of an
ensemble are drawn sequentially, a smaller ``m`` sees a prefix of the rows of a
larger one. This is the common-random-numbers design: differences between
grid points then reflect the grid variable rather than resampling noise.
``paired=False`` draws everything afresh per grid point.

A trial counts as a failure when no estimate is produced (statuses
``BelowHalf``, ``NormUnresolved``, ``Degenerate`` or a solver failure).
``Saturated`` EDF trials keep their limiting estimate ``Lambda = 0`` and are
averaged like any other. Aggregate means and standard deviations are over
successful trials only.
"""

from __future__ import annotations

import csv
import io
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import rng
from .edf import NormStatus, estimate_norm, sample_size_fixed_signal, sample_size_uniform
from .errors import ConfigError, InvalidParameterError
from .measurement import ConstantThreshold, GaussianDither, build_ensemble, \
    generate_sparse_signal, quantize
from .pipeline import SplitPlan, combined_recover, plan_split
from .recovery import recover_augmented, sample_size_augmented, sample_size_direction

METHODS = ("PVaug", "EDF", "Combined")
ROW_HEADER = ["method", "grid_var", "grid_value", "trial", "seed", "norm_error",
              "signal_error", "status", "wall_ms"]
AGG_HEADER = ["method", "grid_var", "grid_value", "trials", "failures", "mean_norm_error",
              "std_norm_error", "mean_signal_error", "std_signal_error"]
TAU_RATIOS = (0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0)
WORKERS_ENV = "ONEBITCS_WORKERS"


@dataclass
class SweepConfig:
    n: int = 300
    s: int = 10
    r: float = 10.0
    R: float = 20.0
    methods: tuple = METHODS
    trials: int = 40
    master_seed: int = 0
    # m sweep
    m_over_n: tuple = (1.0, 2.0, 4.0, 6.0)
    tau: Optional[float] = None  # defaults to r
    # tau sweep
    tau_grid: Optional[tuple] = None  # defaults to TAU_RATIOS * (r + R) / 2
    tau_m_over_n: float = 6.0
    paired: bool = True
    timing: bool = True
    workers: int = 1
    feas_tol: float = 1e-8
    opt_tol: float = 1e-8
    t_tol: float = 1e-6

    def __post_init__(self):
        self.methods = tuple(self.methods)
        self.m_over_n = tuple(float(v) for v in self.m_over_n)
        if self.tau_grid is not None:
            self.tau_grid = tuple(float(v) for v in self.tau_grid)

    @classmethod
    def fast(cls, **overrides) -> "SweepConfig":
        """Small preset for smoke tests and CI."""
        return cls(**{"n": 60, "s": 4, "trials": 10, **overrides})

    @property
    def threshold(self) -> float:
        return self.r if self.tau is None else float(self.tau)

    @property
    def taus(self) -> tuple:
        if self.tau_grid is not None:
            return self.tau_grid
        mid = 0.5 * (self.r + self.R)
        return tuple(k * mid for k in TAU_RATIOS)

    def validate(self) -> None:
        if not 0 < self.s <= self.n:
            raise ConfigError(f"need 0 < s <= n, got s={self.s}, n={self.n}")
        if not 0 < self.r <= self.R:
            raise ConfigError(f"need 0 < r <= R, got r={self.r}, R={self.R}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        bad = [m for m in self.methods if m not in METHODS]
        if bad or not self.methods:
            raise ConfigError(f"methods must be a nonempty subset of {METHODS}, got {self.methods}")
        if not self.m_over_n or min(self.m_over_n) <= 0:
            raise ConfigError("m_over_n grid must be nonempty and positive")
        if not self.taus or min(self.taus) <= 0:
            raise ConfigError("tau grid must be nonempty and positive")
        if not self.threshold > 0 or not self.tau_m_over_n > 0:
            raise ConfigError("tau and tau_m_over_n must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")


@dataclass(frozen=True)
class TrialRow:
    method: str
    grid_var: str
    grid_value: float
    trial: int
    seed: int
    norm_error: Optional[float]
    signal_error: Optional[float]
    status: str
    wall_ms: float

    @property
    def failed(self) -> bool:
        return self.norm_error is None


@dataclass(frozen=True)
class AggregateRow:
    method: str
    grid_var: str
    grid_value: float
    trials: int
    failures: int
    mean_norm_error: Optional[float]
    std_norm_error: Optional[float]
    mean_signal_error: Optional[float]
    std_signal_error: Optional[float]


@dataclass
class SweepReport:
    config: SweepConfig
    grid_var: str
    rows: list
    aggregates: list = field(default_factory=list)

    def __post_init__(self):
        if not self.aggregates:
            self.aggregates = aggregate(self.rows)

    def aggregate_for(self, method: str) -> list:
        return [a for a in self.aggregates if a.method == method]

    def mean_curve(self, method: str, column: str = "norm") -> tuple[np.ndarray, np.ndarray]:
        aggs = self.aggregate_for(method)
        grid = np.array([a.grid_value for a in aggs])
        vals = [getattr(a, f"mean_{column}_error") for a in aggs]
        return grid, np.array([np.nan if v is None else v for v in vals])

    def rows_csv(self) -> str:
        return _to_csv(ROW_HEADER, self.rows)

    def aggregates_csv(self) -> str:
        return _to_csv(AGG_HEADER, self.aggregates)

    def write(self, path) -> tuple[Path, Path]:
        """Write rows to ``path`` and aggregates to ``<stem>.agg.csv`` beside it."""
        path = Path(path)
        agg_path = agg_path_for(path)
        path.write_text(self.rows_csv())
        agg_path.write_text(self.aggregates_csv())
        return path, agg_path


def agg_path_for(path) -> Path:
    path = Path(path)
    stem = path.name[:-4] if path.name.endswith(".csv") else path.name
    return path.with_name(stem + ".agg.csv")


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _to_csv(header, records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for rec in records:
        w.writerow([_fmt(getattr(rec, k)) for k in header])
    return buf.getvalue()


def _opt_float(s: str) -> Optional[float]:
    return float(s) if s != "" else None


def read_rows(path) -> list:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ROW_HEADER:
            raise ConfigError(f"{path}: unexpected header {reader.fieldnames}")
        return [TrialRow(method=d["method"], grid_var=d["grid_var"],
                         grid_value=float(d["grid_value"]), trial=int(d["trial"]),
                         seed=int(d["seed"]), norm_error=_opt_float(d["norm_error"]),
                         signal_error=_opt_float(d["signal_error"]), status=d["status"],
                         wall_ms=float(d["wall_ms"]))
                for d in reader]


def _mean_std(vals):
    if not vals:
        return None, None
    mean = math.fsum(vals) / len(vals)
    if len(vals) < 2:
        return mean, 0.0
    return mean, math.sqrt(math.fsum((v - mean) ** 2 for v in vals) / (len(vals) - 1))


def aggregate(rows) -> list:
    """Per-(method, grid point) summaries, in first-appearance order."""
    groups: dict = {}
    for row in rows:
        groups.setdefault((row.method, row.grid_var, row.grid_value), []).append(row)
    out = []
    for (method, grid_var, grid_value), grp in groups.items():
        ok = [r for r in grp if not r.failed]
        mn, sn = _mean_std([r.norm_error for r in ok])
        ms, ss = _mean_std([r.signal_error for r in ok if r.signal_error is not None])
        out.append(AggregateRow(method, grid_var, grid_value, len(grp), len(grp) - len(ok),
                                mn, sn, ms, ss))
    return out


# --- trials ---------------------------------------------------------------------

def _trial_seed(config: SweepConfig, grid_index: int, trial: int) -> int:
    if config.paired:
        return rng.derive_seed(config.master_seed, trial)
    return rng.derive_seed(config.master_seed, trial, grid_index + 1)


def _run_trial(config: SweepConfig, method: str, grid_var: str, grid_value: float,
               trial: int, seed: int, m: int, tau: float) -> TrialRow:
    start = time.perf_counter()
    signal = generate_sparse_signal(config.n, config.s, config.r, config.R, seed)
    x, norm = signal.values, signal.norm
    ens_seed = rng.derive_seed(seed, 1)
    norm_err = sig_err = None
    tols = dict(feas_tol=config.feas_tol, opt_tol=config.opt_tol, t_tol=config.t_tol)
    if method == "PVaug":
        ens = build_ensemble(m, config.n, GaussianDither(tau), ens_seed)
        res = recover_augmented(ens, quantize(ens, x), **tols)
        status = res.status.value
        if res.estimate is not None:
            norm_err = abs(float(np.linalg.norm(res.estimate)) - norm)
            sig_err = float(np.linalg.norm(res.estimate - x))
    elif method == "EDF":
        ens = build_ensemble(m, config.n, ConstantThreshold(tau), ens_seed)
        est = estimate_norm(quantize(ens, x), tau)
        status = est.status.value
        if est.status is not NormStatus.BELOW_HALF:
            norm_err = abs(est.lam - norm)
    elif method == "Combined":
        plan = SplitPlan.even(m)
        res = combined_recover(signal, plan, tau, rng.derive_seed(seed, 2), **tols)
        status = res.status.value
        if res.estimate is not None:
            norm_err = abs(res.norm.lam - norm)
            sig_err = float(np.linalg.norm(res.estimate - x))
    else:
        raise ConfigError(f"unknown method {method!r}")
    wall = (time.perf_counter() - start) * 1e3 if config.timing else 0.0
    return TrialRow(method, grid_var, float(grid_value), trial, seed, norm_err, sig_err,
                    status, round(wall, 3))


def _run_task(args):
    return _run_trial(*args)


def _workers(config: SweepConfig) -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV} must be an integer, got {env!r}") from None
    return config.workers


def _sweep(config: SweepConfig, grid_var: str, points: list) -> SweepReport:
    """``points`` is a list of ``(grid_value, m, tau)``."""
    config.validate()
    tasks = []
    for method in config.methods:
        for gi, (value, m, tau) in enumerate(points):
            for t in range(config.trials):
                tasks.append((config, method, grid_var, value, t, _trial_seed(config, gi, t), m, tau))
    workers = _workers(config)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        rows = [_run_task(t) for t in tasks]
    order = {m: i for i, m in enumerate(config.methods)}
    gidx = {v: i for i, (v, _, _) in enumerate(points)}
    rows.sort(key=lambda r: (order[r.method], gidx[r.grid_value], r.trial))
    return SweepReport(config=config, grid_var=grid_var, rows=rows)


def run_m_sweep(config: SweepConfig) -> SweepReport:
    """Errors versus the oversampling ratio ``m/n`` at fixed threshold ``config.threshold``."""
    points = [(v, max(1, round(v * config.n)), config.threshold) for v in config.m_over_n]
    return _sweep(config, "m_over_n", points)


def run_tau_sweep(config: SweepConfig) -> SweepReport:
    """Errors versus the threshold ``tau`` at ``m = tau_m_over_n * n``.

    PVaug uses dither ``N(0, tau^2)``, EDF and Combined the constant ``tau``,
    so the expected shift magnitudes match across methods.
    """
    m = max(1, round(config.tau_m_over_n * config.n))
    return _sweep(config, "tau", [(t, m, t) for t in config.taus])


# --- sample-size planning --------------------------------------------------------

PLAN_METHODS = ("edf", "edf-uniform", "pvaug", "pv", "combined")


def plan_sample_size(method: str, *, delta: float, epsilon: float = 0.05, r: float = None,
                     R: float = None, n: int = None, s: int = None, tau: float = None,
                     C: float = 1.0, C0: float = 1.0, C1: float = 1.0) -> dict:
    """Evaluate the sample-size formula for ``method``.

    Returns a dict with the measurement count(s) under ``"m"`` (or ``"m1"``
    and ``"m2"`` for ``combined``) and the formula under ``"formula"``.
    Missing or out-of-range parameters raise :class:`InvalidParameterError`
    naming the violated hypothesis.
    """
    def need(**kw):
        missing = [k for k, v in kw.items() if v is None]
        if missing:
            raise InvalidParameterError(f"{method}: missing parameter(s) {', '.join(missing)}")

    if method == "edf":
        need(r=r, R=R)
        return {"m": sample_size_fixed_signal(r, R, delta, epsilon),
                "formula": "m = ceil(4 pi e^2 (R^4/r^2) delta^-2 log(2/epsilon)), tau = r"}
    if method == "edf-uniform":
        need(r=r, R=R, n=n, s=s)
        return {"m": sample_size_uniform(r, R, delta, n, s, C1),
                "formula": "m = ceil(C1 (R^4/r^2) delta^-2 s log(n R^2/(s delta r))), tau = 3r/5; "
                           "success prob 1 - 14 exp(-delta^2 r^2 m/(C1 R^4))"}
    if method == "pvaug":
        need(R=R, n=n, s=s)
        tau = R if tau is None else tau
        return {"m": sample_size_augmented(R, tau, delta, n, s, C),
                "formula": "m = ceil(C (sqrt(R^2+tau^2)/delta)^5 s log^2(2n/s)); "
                           "error <= 4 sqrt(R^2+tau^2) delta/tau"}
    if method == "pv":
        need(n=n, s=s)
        return {"m": sample_size_direction(delta, n, s, C),
                "formula": "m > C delta^-5 s log^2(2n/s) (direction only)"}
    if method == "combined":
        need(r=r, R=R, n=n, s=s)
        plan = plan_split(r, R, delta, epsilon, n, s, C0=C0, C=C)
        return {"m1": plan.m1, "m2": plan.m2, "m": plan.m,
                "formula": "m1 (norm) = ceil(4 pi e^2 (R^4/r^2) delta^-2 log(4/epsilon)); "
                           "m2 (direction) = ceil(C0 delta^-5 R^5 (s log^2(n/s) + log(C/epsilon)))"}
    raise InvalidParameterError(f"unknown plan method {method!r}; choose from {PLAN_METHODS}")


# --- config files ------------------------------------------------------------------

_TUPLE_FIELDS = {"methods", "m_over_n", "tau_grid"}
_BOOL_FIELDS = {"paired", "timing"}
_INT_FIELDS = {"n", "s", "trials", "master_seed", "workers"}


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    try:
        if key in _TUPLE_FIELDS:
            items = [v.strip() for v in raw.split(",") if v.strip()]
            return tuple(items) if key == "methods" else tuple(float(v) for v in items)
        if key in _BOOL_FIELDS:
            if raw.lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(raw)
            return raw.lower() in ("true", "1", "yes")
        if key in _INT_FIELDS:
            return int(raw)
        if key == "tau" and raw.lower() in ("", "none"):
            return None
        return float(raw)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None


def parse_config(text: str, base: Optional[SweepConfig] = None) -> SweepConfig:
    """Read ``key = value`` lines (``#`` starts a comment) over ``base``."""
    names = {f.name for f in fields(SweepConfig)}
    updates = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, raw = (p.strip() for p in line.split("=", 1))
        if key not in names:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        updates[key] = _parse_value(key, raw)
    return replace(base or SweepConfig(), **updates)


def load_config(path, base: Optional[SweepConfig] = None) -> SweepConfig:
    return parse_config(Path(path).read_text(), base)
