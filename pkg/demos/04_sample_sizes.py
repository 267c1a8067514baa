"""
Measurement budgets
===================

The sample-size formulas side by side. The augmented and direction bounds
carry an unspecified absolute constant C, set to 1 here, so those numbers
only show how the budget scales.
"""

from onebitcs import bench

r, R, n, s = 10.0, 20.0, 300, 10

for delta in (2.0, 1.0, 0.5):
    out = bench.plan_sample_size("edf", delta=delta, r=r, R=R)
    print(f"EDF, fixed signal, delta={delta}: m = {out['m']}")

print()
for delta in (0.9, 0.5, 0.25):
    out = bench.plan_sample_size("pvaug", delta=delta, R=R, n=n, s=s)
    print(f"augmented l1, tau=R, delta={delta}: m = {out['m']:.3e}")

print()
out = bench.plan_sample_size("combined", delta=1.0, r=r, R=R, n=n, s=s)
print(f"two batches: m1 (norm) = {out['m1']}, m2 (direction) = {out['m2']:.3e}")
print(out["formula"])
