"""Topology and indexing of the n-cube.

Vertices are raw integer bitmasks in [0, 2**n); bit i of a vertex is its i-th
coordinate, and neighbors differ by a single bit flip.  Edges get a canonical
integer id: enumerate pairs (v, i) with bit i of v clear, ordered
lexicographically by (v, i).  This fixes a platform-independent ordering of
the n * 2**(n-1) edges, which the sampler relies on for reproducibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DegenerateDecompositionError, DomainError

MAX_DIMENSION = 30

# Table-based edge decoding is O(2**n) memory; past this cap fall back to
# per-element bisection on the (monotone) edge-offset function.
_TABLE_DIMENSION_CAP = 22


def check_dimension(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise DomainError(f"dimension must be an integer, got {n!r}")
    if not 1 <= n <= MAX_DIMENSION:
        raise DomainError(f"dimension must be in [1, {MAX_DIMENSION}], got {n}")
    return int(n)


def check_vertex(v: int, n: int) -> int:
    n = check_dimension(n)
    if not 0 <= v < (1 << n):
        raise DomainError(f"vertex {v} out of range for dimension {n}")
    return int(v)


def vertex_count(n: int) -> int:
    return 1 << check_dimension(n)


def edge_count(n: int) -> int:
    n = check_dimension(n)
    return n << (n - 1)


def neighbors(v: int, n: int) -> list[int]:
    """All n single-bit flips of v, in ascending bit order."""
    v = check_vertex(v, n)
    return [v ^ (1 << i) for i in range(n)]


def popcount_below(v: int) -> int:
    """Sum of popcounts over 0..v-1, in O(log v) time."""
    total = 0
    bit = 0
    while (1 << bit) <= v:
        period = 1 << (bit + 1)
        half = 1 << bit
        total += (v // period) * half + max(0, (v % period) - half)
        bit += 1
    return total


def _edge_offset(v: int, n: int) -> int:
    """Number of canonical edges (w, i) with w < v."""
    return n * v - popcount_below(v)


def encode_edge(v: int, bit: int, n: int) -> int:
    """Canonical id of the edge joining v and v ^ (1 << bit); bit of v must be clear."""
    v = check_vertex(v, n)
    if not 0 <= bit < n:
        raise DomainError(f"bit {bit} out of range for dimension {n}")
    if (v >> bit) & 1:
        raise DomainError(f"bit {bit} of vertex {v} is set; canonical edges anchor at the clear endpoint")
    clear_below = bit - int(bin(v & ((1 << bit) - 1)).count("1"))
    return _edge_offset(v, n) + clear_below


def decode_edge(e: int, n: int) -> tuple[int, int]:
    """Endpoints (u, w) with u < w of the canonical edge id e."""
    n = check_dimension(n)
    if not 0 <= e < edge_count(n):
        raise DomainError(f"edge id {e} out of range for dimension {n}")
    lo, hi = 0, (1 << n) - 1
    # largest v with _edge_offset(v) <= e
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if _edge_offset(mid, n) <= e:
            lo = mid
        else:
            hi = mid - 1
    v = lo
    rank = e - _edge_offset(v, n)
    for i in range(n):
        if not (v >> i) & 1:
            if rank == 0:
                return (v, v | (1 << i))
            rank -= 1
    raise AssertionError("unreachable: rank exceeded clear bit count")


@lru_cache(maxsize=4)
def _offset_table(n: int) -> np.ndarray:
    """_edge_offset(v, n) for all v, used for vectorized decode at small n."""
    pc = np.zeros(1, dtype=np.int64)
    for _ in range(n):
        pc = np.concatenate([pc, pc + 1])
    offsets = np.zeros(1 << n, dtype=np.int64)
    np.cumsum(n - pc[:-1], out=offsets[1:])
    return offsets


def _popcount_array(v: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros_like(v)
    for b in range(n):
        out += (v >> b) & 1
    return out


def decode_edges(e: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized decode_edge: returns (u, w) arrays with u < w elementwise."""
    n = check_dimension(n)
    e = np.asarray(e, dtype=np.int64)
    if e.size and (e.min() < 0 or e.max() >= edge_count(n)):
        raise DomainError("edge id out of range")
    if n <= _TABLE_DIMENSION_CAP:
        offsets = _offset_table(n)
        v = np.searchsorted(offsets, e, side="right") - 1
        rank = e - offsets[v]
    else:
        lo = np.zeros_like(e)
        hi = np.full_like(e, (1 << n) - 1)
        while np.any(lo < hi):
            mid = (lo + hi + 1) >> 1
            off = n * mid - _popcount_below_array(mid)
            go = off <= e
            lo = np.where(go, mid, lo)
            hi = np.where(go, hi, mid - 1)
        v = lo
        rank = e - (n * v - _popcount_below_array(v))
    # position of the (rank+1)-th clear bit of v
    bit = np.full(e.shape, -1, dtype=np.int64)
    seen = np.zeros_like(e)
    for b in range(n):
        clear = ((v >> b) & 1) == 0
        hit = clear & (seen == rank) & (bit < 0)
        bit[hit] = b
        seen += clear
    return v, v | (np.int64(1) << bit)


def _popcount_below_array(v: np.ndarray) -> np.ndarray:
    total = np.zeros_like(v)
    for b in range(64):
        period = np.int64(1) << (b + 1)
        half = np.int64(1) << b
        if not np.any(v >= half):
            break
        total += (v // period) * half + np.maximum(0, (v % period) - half)
    return total


def encode_edges(u: np.ndarray, w: np.ndarray, n: int) -> np.ndarray:
    """Vectorized encode for endpoint arrays; each pair must be a Q^n edge."""
    n = check_dimension(n)
    u = np.asarray(u, dtype=np.int64)
    w = np.asarray(w, dtype=np.int64)
    diff = u ^ w
    if np.any(_popcount_array(diff, n) != 1):
        raise DomainError("endpoints do not differ in exactly one bit")
    v = np.minimum(u, w)
    if u.size and (v.min() < 0 or np.maximum(u, w).max() >= (1 << n)):
        raise DomainError("vertex out of range")
    bitpos = np.zeros_like(v)
    for b in range(n):
        bitpos[(diff >> b) & 1 == 1] = b
    below = _popcount_array(v & (diff - 1), n)
    clear_below = bitpos - below
    return n * v - _popcount_below_array(v) + clear_below


@dataclass(frozen=True)
class SubcubeDescriptor:
    """One block of a prefix decomposition: the high fixed_prefix_bits bits of
    a member vertex equal prefix_value, the low free_dimension bits are free."""

    fixed_prefix_bits: int
    prefix_value: int
    free_dimension: int

    def contains(self, v: int) -> bool:
        return (v >> self.free_dimension) == self.prefix_value

    def vertex_range(self) -> tuple[int, int]:
        lo = self.prefix_value << self.free_dimension
        return lo, lo + (1 << self.free_dimension)


def subcube_decompose(n: int, alpha: float) -> list[SubcubeDescriptor]:
    """Partition Q^n into 2**floor(alpha*n) subcubes of dimension n - floor(alpha*n).

    The fixed prefix is taken over the high-order bits.  The tiny nudge before
    flooring compensates binary-float products like 0.3 * 10 = 2.999...96.
    """
    n = check_dimension(n)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must be in (0, 1), got {alpha}")
    f = int(np.floor(alpha * n + 1e-9))
    if f < 1:
        raise DegenerateDecompositionError(f"floor(alpha*n) = 0 for n={n}, alpha={alpha}")
    d = n - f
    return [SubcubeDescriptor(f, q, d) for q in range(1 << f)]
