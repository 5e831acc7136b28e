"""Counter-based seed derivation.

Every stochastic component in this package draws from a fresh
``numpy.random.Generator`` whose seed is a pure function of a master seed
and the logical identity of the task (cell index, trial index, start
vertex, epoch, ...).  Execution order and worker count therefore cannot
change any random stream.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

# Stream tags keep independent consumers of the same master seed apart.
STREAM_LOMAX = 0x01
STREAM_UNIFORM = 0x02
STREAM_WALK = 0x03
STREAM_INIT = 0x04
STREAM_SHUFFLE = 0x05
STREAM_NEGATIVE = 0x06
STREAM_TRIAL = 0x07
STREAM_ALGORITHM = 0x08
STREAM_TIEBREAK = 0x09


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def mix64(*parts: int) -> int:
    """Hash a tuple of integers into a 64-bit seed (splitmix64 chain)."""
    h = 0x8C5E548F0A1B3CD7
    for p in parts:
        h = _splitmix64(h ^ (int(p) & _MASK64))
    return h


def mix64_pairs(seed: int, i: "np.ndarray", j: "np.ndarray") -> "np.ndarray":
    """Vectorised ``mix64(seed, i, j)`` for integer arrays ``i``, ``j``.

    Matches the scalar function exactly; used for order-free tie-break
    priorities on edges.
    """
    with np.errstate(over="ignore"):
        h = np.full(i.shape, np.uint64(0x8C5E548F0A1B3CD7))
        for part in (np.uint64(seed & _MASK64), i.astype(np.uint64), j.astype(np.uint64)):
            x = (h ^ part) + np.uint64(0x9E3779B97F4A7C15)
            x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
            h = x ^ (x >> np.uint64(31))
    return h


def substream(*parts: int) -> np.random.Generator:
    """Independent generator for the logical task identified by ``parts``."""
    return np.random.Generator(np.random.PCG64(mix64(*parts)))
