"""Command-line entry point: ``python -m onebitcs <command> ...``.

Commands::

    simulate        draw a signal and an ensemble, write the ensemble, bits and signal
    estimate-norm   EDF norm estimate from a bits file
    recover         LP recovery from an ensemble and a bits file
    sweep-m         error versus m/n, CSV report
    sweep-tau       error versus tau, CSV report
    plan            sample-size calculators

Invalid parameters, unreadable files and bad config keys exit with status 2.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from . import bench
from .edf import estimate_norm
from .errors import ConfigError, OneBitError
from .lp import write_lp
from .measurement import ConstantThreshold, GaussianDither, NoShift, build_ensemble, \
    generate_sparse_signal, quantize, read_ensemble_csv, write_ensemble_csv
from .recovery import formulate_pv, formulate_pv_augmented, recover_augmented, \
    recover_direction

EXIT_CONFIG = 2


def _shift_kind(name: str, tau):
    if name == "none":
        return NoShift()
    if tau is None:
        raise ConfigError(f"--tau is required for shift '{name}'")
    return GaussianDither(tau) if name == "gaussian" else ConstantThreshold(tau)


def _read_bits(path) -> np.ndarray:
    y = np.loadtxt(path, dtype=float, ndmin=1)
    if y.size and not np.all(np.abs(y) == 1):
        raise ConfigError(f"{path}: bits must be +1 or -1")
    return y.astype(np.int8)


def cmd_simulate(args) -> int:
    signal = generate_sparse_signal(args.n, args.s, args.r, args.R, args.seed)
    ens = build_ensemble(args.m, args.n, _shift_kind(args.shift, args.tau), args.seed + 1)
    y = quantize(ens, signal.values)
    write_ensemble_csv(ens, args.out)
    np.savetxt(args.bits, y, fmt="%d")
    if args.signal_out:
        np.savetxt(args.signal_out, signal.values, fmt="%.17g")
    print(f"m={ens.m} n={ens.n} shift={args.shift} tau={ens.tau!r} seed={args.seed}")
    print(f"norm={signal.norm!r} support={signal.support.tolist()}")
    print(f"fraction_negative={float(np.mean(y < 0))!r}")
    return 0


def cmd_estimate_norm(args) -> int:
    tau = args.tau
    if tau is None and args.ensemble:
        ens = read_ensemble_csv(args.ensemble)
        if not isinstance(ens.shift_kind, ConstantThreshold):
            raise ConfigError("norm estimation needs constant-threshold bits")
        tau = ens.tau
    if tau is None:
        raise ConfigError("give --tau or --ensemble")
    est = estimate_norm(_read_bits(args.bits), tau)
    lam = "" if est.lam is None else repr(est.lam)
    print(f"status={est.status.value} lambda={lam} f_m={est.f_m!r} m={est.m} tau={est.tau!r}")
    return 0


def cmd_recover(args) -> int:
    ens = read_ensemble_csv(args.ensemble)
    y = _read_bits(args.bits)
    augmented = isinstance(ens.shift_kind, GaussianDither)
    if args.export_lp:
        p = (formulate_pv_augmented(ens.A, ens.shifts, ens.tau, y) if augmented
             else formulate_pv(ens.A, y))
        write_lp(p, args.export_lp)
    tols = dict(feas_tol=args.feas_tol, opt_tol=args.opt_tol, t_tol=args.t_tol)
    res = recover_augmented(ens, y, **tols) if augmented else recover_direction(ens, y, **tols)
    print(f"status={res.status.value} objective={res.objective_value!r} "
          f"eq_residual={res.eq_residual!r} ineq_residual={res.ineq_residual!r}")
    if res.t_sharp is not None:
        print(f"t_sharp={res.t_sharp!r}")
    if res.estimate is not None:
        print(f"estimate_norm={float(np.linalg.norm(res.estimate))!r}")
        if args.out:
            np.savetxt(args.out, res.estimate, fmt="%.17g")
    return 0


def _sweep_config(args) -> bench.SweepConfig:
    base = bench.SweepConfig.fast() if args.fast else bench.SweepConfig()
    if args.config:
        base = bench.load_config(args.config, base)
    overrides = {}
    for key in ("n", "s", "r", "R", "trials", "tau", "workers"):
        if getattr(args, key) is not None:
            overrides[key] = getattr(args, key)
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.methods:
        overrides["methods"] = tuple(args.methods.split(","))
    if args.grid:
        key = "m_over_n" if args.command == "sweep-m" else "tau_grid"
        overrides[key] = bench._parse_value(key, args.grid)
    if args.m_over_n is not None:
        overrides["tau_m_over_n"] = args.m_over_n
    if args.no_timing:
        overrides["timing"] = False
    if args.unpaired:
        overrides["paired"] = False
    return replace(base, **overrides)


def cmd_sweep(args) -> int:
    config = _sweep_config(args)
    run = bench.run_m_sweep if args.command == "sweep-m" else bench.run_tau_sweep
    report = run(config)
    rows_path, agg_path = report.write(args.out)
    print(f"{len(report.rows)} rows -> {rows_path}, aggregates -> {agg_path}")
    for a in report.aggregates:
        mn = "-" if a.mean_norm_error is None else f"{a.mean_norm_error:.4g}"
        ms = "-" if a.mean_signal_error is None else f"{a.mean_signal_error:.4g}"
        print(f"{a.method:9s} {a.grid_var}={a.grid_value:<8.4g} norm_err={mn:>10s} "
              f"signal_err={ms:>10s} failures={a.failures}/{a.trials}")
    return 0


def cmd_plan(args) -> int:
    out = bench.plan_sample_size(args.method, delta=args.delta, epsilon=args.epsilon, r=args.r,
                                 R=args.R, n=args.n, s=args.s, tau=args.tau, C=args.C,
                                 C0=args.C0, C1=args.C1)
    for key in ("m1", "m2", "m"):
        if key in out:
            print(f"{key}={out[key]}")
    print(f"formula: {out['formula']}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="onebitcs", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="draw a signal and one-bit measurements")
    p.add_argument("--n", type=int, default=300)
    p.add_argument("--s", type=int, default=10)
    p.add_argument("--r", type=float, default=10.0)
    p.add_argument("--R", type=float, default=20.0)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--shift", choices=("gaussian", "constant", "none"), default="gaussian")
    p.add_argument("--tau", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="ensemble CSV")
    p.add_argument("--bits", required=True, help="output bits file, one +-1 per line")
    p.add_argument("--signal-out", help="write the true signal here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate-norm", help="EDF norm estimate from constant-threshold bits")
    p.add_argument("--bits", required=True)
    p.add_argument("--tau", type=float)
    p.add_argument("--ensemble", help="read tau from this ensemble CSV")
    p.set_defaults(func=cmd_estimate_norm)

    p = sub.add_parser("recover", help="LP recovery (augmented for Gaussian dither, else direction)")
    p.add_argument("--ensemble", required=True)
    p.add_argument("--bits", required=True)
    p.add_argument("--out", help="write the estimate here")
    p.add_argument("--export-lp", help="write the LP in text form before solving")
    p.add_argument("--feas-tol", type=float, default=1e-8)
    p.add_argument("--opt-tol", type=float, default=1e-8)
    p.add_argument("--t-tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_recover)

    for name, grid_help in (("sweep-m", "comma-separated m/n values"),
                            ("sweep-tau", "comma-separated absolute tau values")):
        p = sub.add_parser(name, help=f"Monte Carlo sweep ({name[6:]})")
        p.add_argument("--config", help="key = value file; flags override it")
        p.add_argument("--fast", action="store_true", help="n=60, s=4, 10 trials")
        p.add_argument("--n", type=int)
        p.add_argument("--s", type=int)
        p.add_argument("--r", type=float)
        p.add_argument("--R", type=float)
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int, help="master seed")
        p.add_argument("--methods", help="comma-separated subset of PVaug,EDF,Combined")
        p.add_argument("--grid", help=grid_help)
        p.add_argument("--tau", type=float, help="threshold for sweep-m (default r)")
        p.add_argument("--m-over-n", type=float, help="fixed m/n for sweep-tau (default 6)")
        p.add_argument("--workers", type=int)
        p.add_argument("--no-timing", action="store_true", help="write wall_ms as 0")
        p.add_argument("--unpaired", action="store_true",
                       help="fresh signal and ensemble at every grid point")
        p.add_argument("--out", required=True, help="rows CSV; aggregates go to <stem>.agg.csv")
        p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("plan", help="sample-size calculators")
    p.add_argument("method", choices=bench.PLAN_METHODS)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--r", type=float)
    p.add_argument("--R", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--tau", type=float)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--C0", type=float, default=1.0)
    p.add_argument("--C1", type=float, default=1.0)
    p.set_defaults(func=cmd_plan)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OneBitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
