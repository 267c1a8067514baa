"""
Recovering direction and magnitude with random dither
=====================================================

With y = sign(<a_i, x> + b_i) and b_i ~ N(0, tau^2) the bits carry scale
information. Appending b_i / tau as an extra column and solving the
sign-constrained l1 program gives (x#, t#), and tau * x# / t# estimates x
itself, norm included.
"""

import numpy as np

from onebitcs import (GaussianDither, NoShift, build_ensemble, generate_sparse_signal,
                      quantize, recover_augmented, recover_direction)

n, s = 300, 10
sig = generate_sparse_signal(n, s, r=10, R=20, seed=3)
print(f"true norm {sig.norm:.3f}, support {sig.support.tolist()}")

for m_over_n in (1, 2, 4, 6):
    m = m_over_n * n
    ens = build_ensemble(m, n, GaussianDither(sig.r), seed=11)
    res = recover_augmented(ens, quantize(ens, sig.values))
    err = np.linalg.norm(res.estimate - sig.values)
    print(f"m/n={m_over_n}  status={res.status.value}  t#={res.t_sharp:.4f}  "
          f"norm={np.linalg.norm(res.estimate):.3f}  error={err:.3f}  "
          f"residuals={res.eq_residual:.1e}/{res.ineq_residual:.1e}")

# the largest entries of the estimate sit on the true support
top = np.sort(np.argsort(-np.abs(res.estimate))[:s])
print("top entries of the last estimate:", top.tolist())

# without dither the same program only sees the direction
ens = build_ensemble(6 * n, n, NoShift(), seed=11)
res = recover_direction(ens, quantize(ens, sig.values))
print(f"\nunshifted bits: |x#/|x#| - x/|x|| = {np.linalg.norm(res.estimate - sig.direction):.4f}")
