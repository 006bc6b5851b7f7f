"""Reproducible sampling of random subgraphs of the n-cube.

Each of the n * 2**(n-1) canonical edges is kept independently with
probability p.  Two strategies produce that distribution, switched on the
expected edge count m = p * n * 2**(n-1):

* sparse (m < 2**n / 8): draw the total edge count from Binomial(M, p), then
  draw that many distinct edge ids uniformly, rejecting duplicates.  Cost is
  proportional to the output, so tiny p never touches the full edge range.
* dense: geometric-gap skip sampling along the edge-id range.  The uniform
  consumed at candidate position e is keyed by (seed, e), which makes the
  walk a pure function of the seed; the implementation evaluates gaps in
  vectorized blocks but visits exactly the positions the scalar walk would.

The binomial count uses CDF inversion when m < 100 and an exact rejection
sampler (Lorentzian envelope) otherwise; the choice depends only on (M, p),
so a fixed seed always replays the same draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import hypercube
from ._rng import (
    MASK64,
    U64Stream,
    bounded_int,
    keyed_u64_array,
    uniform_open_array,
)
from .errors import DomainError
from .families import ProbabilityFamily, resolve_family

_DENSE_BLOCK = 1 << 18
_INVERSION_MEAN_CAP = 100.0


@dataclass(frozen=True)
class EdgeProbability:
    """Edge retention probability with precomputed logs.

    log_p and log_1mp are -inf at the respective endpoints so downstream
    log-space formulas degrade gracefully at p = 0 and p = 1.
    """

    p: float
    log_p: float
    log_1mp: float

    @classmethod
    def of(cls, p: float) -> "EdgeProbability":
        p = float(p)
        if not 0.0 <= p <= 1.0 or math.isnan(p):
            raise DomainError(f"probability must be in [0, 1], got {p}")
        log_p = math.log(p) if p > 0 else -math.inf
        log_1mp = math.log1p(-p) if p < 1 else -math.inf
        return cls(p, log_p, log_1mp)


def _as_probability(p: "float | EdgeProbability") -> EdgeProbability:
    return p if isinstance(p, EdgeProbability) else EdgeProbability.of(p)


def expected_edge_count(n: int, p: "float | EdgeProbability") -> float:
    """Mean of the Binomial(n * 2**(n-1), p) edge count."""
    return _as_probability(p).p * hypercube.edge_count(n)


def _binomial_inversion(total: int, p: float, u: float) -> int:
    """Inverse-CDF binomial draw from a single uniform in (0, 1]."""
    pmf = math.exp(total * math.log1p(-p))
    cdf = pmf
    k = 0
    ratio = p / (1.0 - p)
    while u > cdf and k < total:
        k += 1
        pmf *= (total - k + 1) / k * ratio
        cdf += pmf
    return k


def _binomial_rejection(total: int, p: float, stream: U64Stream) -> int:
    """Exact binomial draw by rejection from a Lorentzian envelope."""
    pp = min(p, 1.0 - p)
    mean = total * pp
    g = math.lgamma(total + 1)
    plog = math.log(pp)
    pclog = math.log1p(-pp)
    sq = math.sqrt(2.0 * mean * (1.0 - pp))
    while True:
        while True:
            y = math.tan(math.pi * stream.next_uniform())
            em = sq * y + mean
            if 0.0 <= em < total + 1.0:
                break
        em = math.floor(em)
        accept = 1.2 * sq * (1.0 + y * y) * math.exp(
            g - math.lgamma(em + 1) - math.lgamma(total - em + 1)
            + em * plog + (total - em) * pclog
        )
        if stream.next_uniform() <= accept:
            break
    k = int(em)
    return total - k if p > 0.5 else k


def _draw_binomial(total: int, p: float, stream: U64Stream) -> int:
    if total * p < _INVERSION_MEAN_CAP:
        return _binomial_inversion(total, p, stream.next_uniform())
    return _binomial_rejection(total, p, stream)


def _sparse_edge_ids(total: int, p: float, seed: int) -> np.ndarray:
    stream = U64Stream(seed)
    count = _draw_binomial(total, p, stream)
    chosen: set[int] = set()
    while len(chosen) < count:
        idx = bounded_int(stream.next_u64(), total)
        chosen.add(idx)
    return np.sort(np.fromiter(chosen, dtype=np.int64, count=count))


def _dense_edge_ids(total: int, p: float, seed: int) -> np.ndarray:
    log_1mp = math.log1p(-p)
    out: list[int] = []
    pos = 0
    while pos < total:
        lo = pos
        hi = min(pos + _DENSE_BLOCK, total)
        words = keyed_u64_array(seed, np.arange(lo, hi, dtype=np.int64))
        gaps = np.floor(np.log(uniform_open_array(words)) / log_1mp).astype(np.int64)
        while pos < hi:
            e = pos + int(gaps[pos - lo])
            if e >= total:
                return np.asarray(out, dtype=np.int64)
            out.append(e)
            pos = e + 1
    return np.asarray(out, dtype=np.int64)


def sample_edge_ids(n: int, p: "float | EdgeProbability", seed: int,
                    strategy: str | None = None) -> np.ndarray:
    """Sorted canonical edge ids of one sample; strategy override is for tests."""
    prob = _as_probability(p)
    total = hypercube.edge_count(n)
    seed &= MASK64
    if prob.p == 0.0:
        return np.empty(0, dtype=np.int64)
    if prob.p == 1.0:
        return np.arange(total, dtype=np.int64)
    if strategy is None:
        strategy = "sparse" if prob.p * total < (1 << n) / 8 else "dense"
    if strategy == "sparse":
        return _sparse_edge_ids(total, prob.p, seed)
    if strategy == "dense":
        return _dense_edge_ids(total, prob.p, seed)
    raise DomainError(f"unknown strategy {strategy!r}")


def coupled_edge_ids(n: int, ps: "list[float]", seed: int) -> list[np.ndarray]:
    """Monotone coupling: one uniform per edge shared across all requested p.

    Edge e is present at level p iff u_e < p, so the edge set at p1 <= p2 is a
    subset of the edge set at p2.  Costs O(M); intended for tests at small n.
    """
    total = hypercube.edge_count(n)
    words = keyed_u64_array(seed & MASK64, np.arange(total, dtype=np.int64))
    u = uniform_open_array(words)
    out = []
    for p in ps:
        prob = _as_probability(p)
        out.append(np.nonzero(u <= prob.p)[0].astype(np.int64))
    return out


@dataclass(frozen=True)
class SubgraphSample:
    """An immutable sampled subgraph with CSR adjacency over its support.

    support holds the sorted vertices incident to at least one edge; the CSR
    arrays index into support so memory scales with the edge count, not 2**n.
    """

    n: int
    p: EdgeProbability
    seed: int
    edges: np.ndarray       # sorted canonical edge ids, int64
    endpoints: np.ndarray   # (m, 2) int64, endpoints[i, 0] < endpoints[i, 1]
    support: np.ndarray     # sorted vertices of degree >= 1
    indptr: np.ndarray      # CSR row pointer over support
    neighbor_local: np.ndarray  # CSR column indices (positions in support)

    @property
    def edge_total(self) -> int:
        return int(self.edges.size)

    @property
    def degrees(self) -> np.ndarray:
        """Degree of each support vertex (parallel to support)."""
        return np.diff(self.indptr)

    def degree_of(self, v: int) -> int:
        i = np.searchsorted(self.support, v)
        if i < self.support.size and self.support[i] == v:
            return int(self.indptr[i + 1] - self.indptr[i])
        return 0

    def local_index(self, v: int) -> int:
        i = np.searchsorted(self.support, v)
        if i >= self.support.size or self.support[i] != v:
            raise DomainError(f"vertex {v} has no incident edges in this sample")
        return int(i)

    def neighbors_of(self, v: int) -> np.ndarray:
        """Sorted global ids of the sampled neighbors of v (empty if isolated)."""
        i = np.searchsorted(self.support, v)
        if i >= self.support.size or self.support[i] != v:
            return np.empty(0, dtype=np.int64)
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return self.support[self.neighbor_local[lo:hi]]

    def adjacency(self):
        """scipy CSR adjacency over support-local indices."""
        from scipy.sparse import csr_matrix

        s = self.support.size
        data = np.ones(self.neighbor_local.size, dtype=np.float64)
        return csr_matrix((data, self.neighbor_local, self.indptr), shape=(s, s))


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _build_sample(n: int, prob: EdgeProbability, seed: int, ids: np.ndarray) -> SubgraphSample:
    if ids.size:
        u, w = hypercube.decode_edges(ids, n)
    else:
        u = w = np.empty(0, dtype=np.int64)
    endpoints = np.column_stack([u, w]) if ids.size else np.empty((0, 2), dtype=np.int64)
    support = np.unique(np.concatenate([u, w])) if ids.size else np.empty(0, dtype=np.int64)
    lu = np.searchsorted(support, u)
    lw = np.searchsorted(support, w)
    src = np.concatenate([lu, lw])
    dst = np.concatenate([lw, lu])
    order = np.lexsort((dst, src))
    indptr = np.zeros(support.size + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=support.size), out=indptr[1:])
    return SubgraphSample(
        n=n,
        p=prob,
        seed=seed,
        edges=_freeze(ids.astype(np.int64)),
        endpoints=_freeze(endpoints),
        support=_freeze(support),
        indptr=_freeze(indptr),
        neighbor_local=_freeze(dst[order]),
    )


def sample_subgraph(n: int, p: "float | EdgeProbability | ProbabilityFamily | str",
                    seed: int, strategy: str | None = None) -> SubgraphSample:
    """Draw G(Q^n, p): each canonical edge kept independently with probability p.

    Identical (n, p, seed) always produce identical samples.  p may be a
    literal, an EdgeProbability, or a symbolic family (evaluated at n).
    """
    n = hypercube.check_dimension(n)
    if isinstance(p, (ProbabilityFamily, str)):
        prob = EdgeProbability.of(resolve_family(p).evaluate(n))
    else:
        prob = _as_probability(p)
    ids = sample_edge_ids(n, prob, seed, strategy=strategy)
    return _build_sample(n, prob, seed & MASK64, ids)


def sample_from_edge_ids(n: int, ids, p: float = 0.0, seed: int = 0) -> SubgraphSample:
    """Wrap an explicit edge-id list (sorted, unique) as a sample."""
    n = hypercube.check_dimension(n)
    ids = np.asarray(sorted(set(int(e) for e in np.asarray(ids).ravel())), dtype=np.int64)
    return _build_sample(n, _as_probability(p), seed & MASK64, ids)


def sample_from_endpoints(n: int, pairs, p: float = 0.0, seed: int = 0) -> SubgraphSample:
    """Wrap explicit (u, w) endpoint pairs as a sample; pairs must be Q^n edges."""
    n = hypercube.check_dimension(n)
    arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    ids = hypercube.encode_edges(arr[:, 0], arr[:, 1], n) if arr.size else np.empty(0, dtype=np.int64)
    if np.unique(ids).size != ids.size:
        raise DomainError("duplicate edges in endpoint list")
    return sample_from_edge_ids(n, ids, p=p, seed=seed)


_HEADER_PREFIX = "cube-subgraph v1"


def write_edge_list(sample: SubgraphSample, path) -> None:
    """Text edge-list format: header, then one 'u v' line per edge, ascending id."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{_HEADER_PREFIX} n={sample.n} p={sample.p.p!r} seed={sample.seed}\n")
        for u, w in sample.endpoints:
            fh.write(f"{u} {w}\n")


def read_edge_list(path) -> SubgraphSample:
    """Parse and validate an edge-list file written by write_edge_list."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().rstrip("\n")
        fields = header.split()
        if len(fields) != 5 or " ".join(fields[:2]) != _HEADER_PREFIX:
            raise DomainError(f"bad edge-list header: {header!r}")
        try:
            n = int(fields[2].removeprefix("n="))
            p = float(fields[3].removeprefix("p="))
            seed = int(fields[4].removeprefix("seed="))
        except ValueError as exc:
            raise DomainError(f"bad edge-list header: {header!r}") from exc
        n = hypercube.check_dimension(n)
        pairs = []
        for lineno, line in enumerate(fh, start=2):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 2:
                raise DomainError(f"line {lineno}: expected 'u v', got {line!r}")
            u, w = int(parts[0]), int(parts[1])
            if not u < w:
                raise DomainError(f"line {lineno}: endpoints must satisfy u < v")
            pairs.append((u, w))
    arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    ids = hypercube.encode_edges(arr[:, 0], arr[:, 1], n) if arr.size else np.empty(0, dtype=np.int64)
    if np.any(np.diff(ids) <= 0):
        raise DomainError("edge ids not strictly increasing")
    return _build_sample(n, _as_probability(p), seed & MASK64, ids)
