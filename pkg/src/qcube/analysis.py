"""Degree statistics, connected components, and the subcube degree census."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import hypercube
from .errors import DomainError
from .sampler import SubgraphSample


@dataclass(frozen=True)
class DegreeProfile:
    """Histogram of vertex degrees; index d counts vertices of degree d."""

    histogram: np.ndarray  # length n + 1, int64
    max_degree: int
    total_edges: int

    def to_json_dict(self) -> dict:
        return {
            "histogram": [int(c) for c in self.histogram],
            "max_degree": self.max_degree,
            "total_edges": self.total_edges,
        }


def degree_profile(sample: SubgraphSample) -> DegreeProfile:
    n = sample.n
    hist = np.zeros(n + 1, dtype=np.int64)
    degs = sample.degrees
    if degs.size:
        hist += np.bincount(degs, minlength=n + 1)
    hist[0] += (1 << n) - sample.support.size
    max_degree = int(degs.max()) if degs.size else 0
    return DegreeProfile(hist, max_degree, sample.edge_total)


def tail_count(profile: DegreeProfile, k: int) -> int:
    """X_k: number of vertices with degree >= k.  X_0 is 2**n."""
    n = profile.histogram.size - 1
    if not 0 <= k <= n + 1:
        raise DomainError(f"k must be in [0, {n + 1}], got {k}")
    return int(profile.histogram[k:].sum())


@dataclass(frozen=True)
class ComponentSummary:
    """Size and shape of one nontrivial connected component.

    A star is a tree whose center touches every other vertex; its largest
    adjacency eigenvalue is exactly sqrt(edge_count), recorded here.  A
    single edge counts as the 1-edge star.
    """

    vertex_count: int
    edge_count: int
    is_tree: bool
    is_star: bool
    lambda_max_exact: float | None

    def to_json_dict(self) -> dict:
        return {
            "vertex_count": self.vertex_count,
            "edge_count": self.edge_count,
            "is_tree": self.is_tree,
            "is_star": self.is_star,
            "lambda_max_exact": self.lambda_max_exact,
        }


@dataclass(frozen=True)
class ComponentCensus:
    """All nontrivial components plus the aggregate isolated-vertex count.

    component_vertices[i] holds the sorted global vertex ids of
    components[i]; summaries are ordered by smallest member vertex.
    """

    components: list[ComponentSummary]
    isolated_vertices: int
    component_vertices: list[np.ndarray]

    def edge_count_multiset(self) -> dict[int, int]:
        """Y_k: number of components with exactly k edges, as {k: count}."""
        out: dict[int, int] = {}
        for comp in self.components:
            out[comp.edge_count] = out.get(comp.edge_count, 0) + 1
        return out

    def largest_component_edges(self) -> int:
        return max((c.edge_count for c in self.components), default=0)

    def to_json_dict(self) -> dict:
        return {
            "isolated_vertices": self.isolated_vertices,
            "components": [c.to_json_dict() for c in self.components],
        }


def _union_find_labels(size: int, lu: np.ndarray, lw: np.ndarray) -> np.ndarray:
    """Root label per element from union by size with path compression."""
    parent = list(range(size))
    weight = [1] * size

    def find(a: int) -> int:
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    for a, b in zip(lu.tolist(), lw.tolist()):
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        if weight[ra] < weight[rb]:
            ra, rb = rb, ra
        parent[rb] = ra
        weight[ra] += weight[rb]

    return np.fromiter((find(i) for i in range(size)), dtype=np.int64, count=size)


def components(sample: SubgraphSample) -> ComponentCensus:
    """Connected components over the support; isolated vertices are one count."""
    s = sample.support.size
    isolated = (1 << sample.n) - s
    if s == 0:
        return ComponentCensus([], isolated, [])
    lu = np.searchsorted(sample.support, sample.endpoints[:, 0])
    lw = np.searchsorted(sample.support, sample.endpoints[:, 1])
    roots = _union_find_labels(s, lu, lw)
    _, inverse = np.unique(roots, return_inverse=True)
    n_comp = int(inverse.max()) + 1
    vertex_counts = np.bincount(inverse, minlength=n_comp)
    edge_counts = np.bincount(inverse[lu], minlength=n_comp)
    max_deg = np.zeros(n_comp, dtype=np.int64)
    np.maximum.at(max_deg, inverse, sample.degrees)

    # order components by their smallest global vertex id
    first_vertex = np.full(n_comp, np.iinfo(np.int64).max, dtype=np.int64)
    np.minimum.at(first_vertex, inverse, sample.support)
    order = np.argsort(first_vertex)

    summaries = []
    vertex_lists = []
    for c in order:
        v_count = int(vertex_counts[c])
        e_count = int(edge_counts[c])
        is_tree = e_count == v_count - 1
        is_star = is_tree and int(max_deg[c]) == v_count - 1
        summaries.append(ComponentSummary(
            vertex_count=v_count,
            edge_count=e_count,
            is_tree=is_tree,
            is_star=is_star,
            lambda_max_exact=math.sqrt(e_count) if is_star else None,
        ))
        vertex_lists.append(sample.support[inverse == c])
    return ComponentCensus(summaries, isolated, vertex_lists)


def component_edge_endpoints(sample: SubgraphSample, vertices: np.ndarray) -> np.ndarray:
    """(k, 2) endpoint array of the edges induced by a component's vertex set."""
    mask = np.isin(sample.endpoints[:, 0], vertices)
    return sample.endpoints[mask]


def subcube_high_degree_census(sample: SubgraphSample, alpha: float,
                               threshold: int) -> tuple[int, int]:
    """Induced max degree per prefix subcube versus a degree threshold.

    Returns (number of subcubes whose induced subgraph has max degree >=
    threshold, number of distinct vertices whose degree in the full sample is
    >= threshold).  The threshold is wired in by the caller.
    """
    descriptors = hypercube.subcube_decompose(sample.n, alpha)
    d = descriptors[0].free_dimension
    n_cubes = len(descriptors)

    if threshold <= 0:
        high_vertices = sample.support.size + ((1 << sample.n) - sample.support.size)
        return n_cubes, high_vertices

    u = sample.endpoints[:, 0]
    w = sample.endpoints[:, 1]
    same = (u >> d) == (w >> d)
    members = np.concatenate([u[same], w[same]])
    if members.size:
        verts, induced_deg = np.unique(members, return_counts=True)
        cube_of = verts >> d
        cube_max = np.zeros(n_cubes, dtype=np.int64)
        np.maximum.at(cube_max, cube_of, induced_deg)
        qualifying = int(np.count_nonzero(cube_max >= threshold))
    else:
        qualifying = 0

    high_vertices = int(np.count_nonzero(sample.degrees >= threshold))
    return qualifying, high_vertices
