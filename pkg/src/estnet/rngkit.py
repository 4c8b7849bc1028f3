"""Keyed counter-based random streams (splitmix64).

Every random decision in the simulator is a pure function of a 64-bit key
built from (master seed, scenario tag, run index, channel). That makes
results independent of thread count, execution order, and chunking, and it
lets the same underlying uniforms be shared across propagation-probability
grid points (common random numbers).

The numba kernel reimplements `mix64`/`combine`/`uniform` bit-for-bit; a
test pins the two implementations against each other.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_INV53 = 1.0 / (1 << 53)


def mix64(z: int) -> int:
    """splitmix64 finalizer: avalanching 64-bit permutation."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def combine(key: int, part: int) -> int:
    """Derive a child key; chainable: combine(combine(seed, a), b)."""
    return mix64((key ^ mix64((part + GOLDEN) & MASK64)) & MASK64)


def uniform(key: int) -> float:
    """Map a (already mixed) key to a uniform in [0, 1)."""
    return (key >> 11) * _INV53


def tag_hash(text: str) -> int:
    """Stable 64-bit hash of a scenario/label string."""
    h = 0
    for b in text.encode("utf-8"):
        h = combine(h, b)
    return h


def combine_vec(key: int, parts: np.ndarray) -> np.ndarray:
    """Vectorized `combine` over an array of parts (uint64 out)."""
    with np.errstate(over="ignore"):
        z = (parts.astype(np.uint64) + np.uint64(GOLDEN))
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
        z = z ^ (z >> np.uint64(31))
        z = np.uint64(key) ^ z
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
        return z ^ (z >> np.uint64(31))


def uniform_vec(keys: np.ndarray) -> np.ndarray:
    return (keys >> np.uint64(11)).astype(np.float64) * _INV53
