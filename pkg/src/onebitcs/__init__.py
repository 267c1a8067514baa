"""One-bit compressive sensing with norm estimation.

Simulation of affine one-bit measurements, l1 recovery of direction and
magnitude by linear programming, an empirical-CDF norm estimator and a
Monte Carlo benchmark harness.
"""

from .edf import (NormEstimate, NormStatus, dkw_failure_probability, empirical_cdf,
                  estimate_norm, norm_from_cdf, sample_size_fixed_signal,
                  sample_size_uniform, sup_deviation)
from .errors import (ConfigError, DimensionMismatchError, DomainError, EmptyMeasurementError,
                     InvalidParameterError, OneBitError)
from .lp import LpProblem, LpSolution, Status, read_lp, solve_lp, write_lp
from .measurement import (ConstantThreshold, GaussianDither, MeasurementEnsemble, NoShift,
                          SparseSignal, build_ensemble, fixed_norm_signal, generate_sparse_signal,
                          quantize, read_ensemble_csv, write_ensemble_csv)
from .pipeline import SplitPlan, combined_recover, plan_split
from .recovery import (RecoveryResult, augmented_error_bound, formulate_pv,
                       formulate_pv_augmented, recover_augmented, recover_direction,
                       sample_size_augmented, sample_size_direction)
from .special import erf, erfc, erfinv, h, h_prime

__version__ = "0.1.0"
