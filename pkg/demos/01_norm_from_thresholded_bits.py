"""
Estimating a norm from thresholded bits
=======================================

Signs of Gaussian measurements lose the scale of the signal. Comparing the
measurements against a fixed threshold tau brings it back: the fraction of
bits that come out -1 is the Gaussian CDF at tau / |x|, and one inverse error
function recovers |x|.
"""

from onebitcs import (ConstantThreshold, build_ensemble, dkw_failure_probability,
                      estimate_norm, fixed_norm_signal, quantize, sample_size_fixed_signal)

# a dense signal of norm 15; the estimator never looks at its direction
x = fixed_norm_signal(50, 15.0, seed=1)
tau = 10.0

# the error shrinks roughly like 1/sqrt(m)
for m in (100, 1000, 10000, 100000):
    ens = build_ensemble(m, 50, ConstantThreshold(tau), seed=m)
    est = estimate_norm(quantize(ens, x), tau)
    print(f"m={m:6d}  F_m={est.f_m:.4f}  Lambda={est.lam:.4f}  error={abs(est.lam - 15):.4f}")

# how many bits guarantee |Lambda - |x|| <= 1 with probability 95%
# for any fixed x with 10 <= |x| <= 20 when tau = 10?
m = sample_size_fixed_signal(10, 20, 1.0, 0.05)
print("\nsample size for delta=1, epsilon=0.05:", m)

# the guarantee comes from a uniform bound on the empirical CDF
print("P(sup |F_m - F| > 0.05) at m=500 is at most", round(dkw_failure_probability(500, 0.05), 4))

# a threshold far above |x| turns every bit to -1 and the estimate degenerates
ens = build_ensemble(200, 50, ConstantThreshold(200.0), seed=0)
print("\nthreshold 200:", estimate_norm(quantize(ens, x), 200.0).status.value)
# one far below |x| leaves F_m near 1/2, where the inversion is unstable:
# either no estimate at all or a wild one
for seed in range(4):
    ens = build_ensemble(200, 50, ConstantThreshold(0.01), seed=seed)
    est = estimate_norm(quantize(ens, x), 0.01)
    print("threshold 0.01:", est.status.value, est.lam)
