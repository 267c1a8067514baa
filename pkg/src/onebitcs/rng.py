"""Seeded random streams.

Every random draw in the package goes through :func:`substream`, which builds
a :class:`numpy.random.Generator` on the counter-based Philox bit generator.
A 64-bit seed plus a tuple of integer keys selects an independent stream via
``SeedSequence(seed, spawn_key=keys)``; two different key tuples never share
state, so the signal, the matrix and the shifts drawn from one seed are
statistically independent and each is reproducible on its own.
"""

from __future__ import annotations

import numpy as np

# Stream keys. Keep these stable: changing them changes every generated instance.
SIGNAL = 0
MATRIX = 1
SHIFTS = 2
CHILD = 3

_MASK64 = (1 << 64) - 1


def substream(seed: int, *keys: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed) & _MASK64, spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(seed: int, *keys: int) -> int:
    """Deterministically derive a child 64-bit seed from ``seed`` and ``keys``."""
    ss = np.random.SeedSequence(int(seed) & _MASK64, spawn_key=(CHILD,) + tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
