"""Counter-based deterministic randomness built on the splitmix64 finalizer.

Every random quantity in this package is a pure function of a 64-bit seed and
an integer key (a counter, an edge id, or a (n, trial) pair), so samples are
bit-identical across platforms and across repeated runs.  numpy's bit
generators are deliberately not used here: their streams are tied to library
internals, while these few lines are frozen by this module.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7B15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

# 2**-53, so (x >> 11) * U53 is uniform on [0, 1) with full double resolution.
U53 = 1.0 / (1 << 53)


def mix64(x: int) -> int:
    """splitmix64 finalizer: a bijective avalanche mix on 64-bit words."""
    x &= MASK64
    x ^= x >> 30
    x = (x * _MIX1) & MASK64
    x ^= x >> 27
    x = (x * _MIX2) & MASK64
    return x ^ (x >> 31)


def keyed_u64(seed: int, key: int) -> int:
    """Deterministic 64-bit word for (seed, key); key ranges over a counter."""
    return mix64((seed + (key + 1) * GOLDEN) & MASK64)


def keyed_u64_array(seed: int, keys: np.ndarray) -> np.ndarray:
    """Vectorized keyed_u64 over an integer array of keys."""
    x = (np.asarray(keys).astype(np.uint64) + np.uint64(1)) * np.uint64(GOLDEN)
    x += np.uint64(seed & MASK64)
    x ^= x >> np.uint64(30)
    x *= np.uint64(_MIX1)
    x ^= x >> np.uint64(27)
    x *= np.uint64(_MIX2)
    x ^= x >> np.uint64(31)
    return x


def uniform_open(word: int) -> float:
    """Map a 64-bit word to a uniform double in (0, 1]."""
    return ((word >> 11) + 1) * U53


def uniform_open_array(words: np.ndarray) -> np.ndarray:
    return ((words >> np.uint64(11)).astype(np.float64) + 1.0) * U53


def uniform_halfopen_array(words: np.ndarray) -> np.ndarray:
    """Uniform doubles in [0, 1) from 64-bit words."""
    return (words >> np.uint64(11)).astype(np.float64) * U53


def bounded_int(word: int, bound: int) -> int:
    """Map a 64-bit word to [0, bound) (multiply-shift; bias ~ bound/2^64)."""
    return (word * bound) >> 64


def pair_hash(a: int, b: int) -> int:
    """64-bit hash of a pair of non-negative integers (injective below 2^32)."""
    return mix64(((a & 0xFFFFFFFF) << 32) | (b & 0xFFFFFFFF))


class U64Stream:
    """Sequential counter stream: draw t is keyed_u64(seed, t)."""

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self.counter = 0

    def next_u64(self) -> int:
        word = keyed_u64(self.seed, self.counter)
        self.counter += 1
        return word

    def next_uniform(self) -> float:
        return uniform_open(self.next_u64())
