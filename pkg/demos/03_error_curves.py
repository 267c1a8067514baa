"""
Error curves versus measurements and threshold
==============================================

Monte Carlo sweeps for the three estimators. Run with ``--full`` for the
desk-scale preset (n=300, s=10, r=10, R=20, 40 trials, several minutes on
one core); the default is the small preset. CSV files land in the current
directory and can be plotted with any tool.
"""

import sys

from onebitcs import bench

cfg = bench.SweepConfig() if "--full" in sys.argv else bench.SweepConfig.fast()
print(f"n={cfg.n} s={cfg.s} trials={cfg.trials}")

# error versus m/n with tau = r
rep = bench.run_m_sweep(cfg)
rep.write("m_sweep.csv")
for method in cfg.methods:
    grid, norm_err = rep.mean_curve(method, "norm")
    _, sig_err = rep.mean_curve(method, "signal")
    print(method.ljust(9), "norm  ", " ".join(f"{e:7.3f}" for e in norm_err))
    print(" " * 9, "signal", " ".join(f"{e:7.3f}" for e in sig_err))
print("m/n grid:", grid.tolist())

# error versus tau at m/n = 6; both ends of the grid hurt
rep = bench.run_tau_sweep(cfg)
rep.write("tau_sweep.csv")
print()
for method in cfg.methods:
    grid, norm_err = rep.mean_curve(method, "norm")
    fails = [a.failures for a in rep.aggregate_for(method)]
    print(method.ljust(9), " ".join(f"{e:7.3f}" for e in norm_err), " failures", fails)
print("tau grid:", [round(float(t), 2) for t in grid])
