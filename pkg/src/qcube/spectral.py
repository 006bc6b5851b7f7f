"""Largest-eigenvalue machinery for sampled subgraphs.

The workhorse is power iteration on A^2.  Subgraphs of the cube are
bipartite, so the adjacency spectrum is symmetric about zero and iterating on
A itself can oscillate between +/- lambda_max; squaring folds the spectrum
and guarantees a dominant eigenvalue up to multiplicity.  A dense symmetric
eigensolver provides the reference spectrum for small instances, and star
components get their exact closed-form value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix

from ._rng import keyed_u64_array, uniform_halfopen_array
from .errors import DenseSizeError, DomainError, InvalidCertificateError
from .sampler import SubgraphSample

DENSE_VERTEX_CAP = 4096

# closed comparison slack when counting eigenvalues >= a bound
_COUNT_SLACK = 1e-9

METHOD_POWER = "power_on_A_squared"
METHOD_DENSE = "dense_reference"
METHOD_STAR = "exact_star"


@dataclass(frozen=True)
class SpectralEstimate:
    """An estimate of lambda_max with convergence metadata.

    residual is ||A^2 x - theta x|| / theta at the final iterate for the
    power method (zero for the exact and dense methods).  A non-converged
    result still carries the best estimate; converged is the explicit status.
    """

    value: float
    method: str
    iterations: int
    residual: float
    tolerance: float
    converged: bool

    def to_json_dict(self) -> dict:
        return {
            "value": self.value,
            "method": self.method,
            "iterations": self.iterations,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "converged": self.converged,
        }


def _zero_estimate(tolerance: float, method: str = METHOD_POWER) -> SpectralEstimate:
    return SpectralEstimate(0.0, method, 0, 0.0, tolerance, True)


def default_max_iterations(n: int) -> int:
    """Default power-iteration budget, 50 * n * log(2**n)."""
    return int(math.ceil(50.0 * n * n * math.log(2.0)))


def _start_vector(size: int, seed: int) -> np.ndarray:
    """All-ones start plus a seeded uniform perturbation of magnitude 1e-3.

    The perturbation breaks the measure-zero event that all-ones is
    orthogonal to the top eigenvector (possible on unbalanced bipartite
    components); it is a pure function of the seed.
    """
    u = uniform_halfopen_array(keyed_u64_array(seed, np.arange(size, dtype=np.int64)))
    x = np.ones(size) + (2.0 * u - 1.0) * 1e-3
    return x / np.linalg.norm(x)


def _power_iteration_squared(matrix: csr_matrix, tolerance: float,
                             max_iterations: int, seed: int) -> SpectralEstimate:
    """Power iteration on A^2; returns sqrt of the dominant A^2 eigenvalue.

    Convergence requires both a relative Rayleigh-quotient change below
    tolerance**2 and a relative residual below tolerance; residual alone is
    robust to slow mixing, the combination avoids premature stops.
    """
    size = matrix.shape[0]
    x = _start_vector(size, seed)
    theta_prev = np.inf
    theta = 0.0
    residual = np.inf
    iterations = 0
    converged = False
    while iterations < max_iterations:
        z = matrix @ (matrix @ x)
        iterations += 1
        theta = float(x @ z)
        if theta <= 0.0 or not np.isfinite(theta):
            # iterate fell into the kernel of A^2; restart off a fresh seed
            x = _start_vector(size, seed + iterations)
            theta_prev = np.inf
            continue
        residual = float(np.linalg.norm(z - theta * x)) / theta
        rel_change = abs(theta - theta_prev) / theta
        if rel_change <= tolerance * tolerance and residual <= tolerance:
            converged = True
            x = z / np.linalg.norm(z)
            break
        theta_prev = theta
        x = z / np.linalg.norm(z)
    return SpectralEstimate(
        value=math.sqrt(max(theta, 0.0)),
        method=METHOD_POWER,
        iterations=iterations,
        residual=residual if np.isfinite(residual) else math.inf,
        tolerance=tolerance,
        converged=converged,
    )


def lambda_max(sample: SubgraphSample, tolerance: float = 1e-10,
               max_iterations: int | None = None, seed: int = 0) -> SpectralEstimate:
    """Largest adjacency eigenvalue of the sample by power iteration on A^2."""
    if tolerance <= 0:
        raise DomainError(f"tolerance must be positive, got {tolerance}")
    if sample.edge_total == 0:
        return _zero_estimate(tolerance)
    if max_iterations is None:
        max_iterations = default_max_iterations(sample.n)
    return _power_iteration_squared(sample.adjacency(), tolerance, max_iterations, seed)


def _dense_eigenvalues(endpoints: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of the adjacency restricted to incident vertices."""
    verts = np.unique(endpoints)
    idx = {int(v): i for i, v in enumerate(verts)}
    size = verts.size
    mat = np.zeros((size, size))
    for u, w in endpoints:
        a, b = idx[int(u)], idx[int(w)]
        mat[a, b] = 1.0
        mat[b, a] = 1.0
    return np.linalg.eigvalsh(mat)


def dense_spectrum(sample: SubgraphSample) -> np.ndarray:
    """All 2**n adjacency eigenvalues, descending; refuses 2**n > 4096."""
    total = 1 << sample.n
    if total > DENSE_VERTEX_CAP:
        raise DenseSizeError(f"2**{sample.n} exceeds the dense cap {DENSE_VERTEX_CAP}")
    if sample.edge_total == 0:
        return np.zeros(total)
    eigs = _dense_eigenvalues(sample.endpoints)
    full = np.concatenate([eigs, np.zeros(total - eigs.size)])
    return np.sort(full)[::-1]


def symmetry_check(spectrum, tol: float) -> bool:
    """True iff the sorted-descending spectrum satisfies l_k = -l_{m+1-k}."""
    spec = np.asarray(spectrum, dtype=np.float64)
    if spec.size and np.any(np.diff(spec) > 0):
        raise DomainError("spectrum must be sorted in descending order")
    if spec.size == 0:
        return True
    return bool(np.max(np.abs(spec + spec[::-1])) <= tol)


def component_lambda_max(component_edges, tolerance: float = 1e-10,
                         max_iterations: int | None = None, seed: int = 0) -> SpectralEstimate:
    """lambda_max of one connected component given its (u, w) edge list.

    Stars are answered exactly as sqrt(edge count); anything else runs power
    iteration restricted to the component.
    """
    endpoints = np.asarray(component_edges, dtype=np.int64).reshape(-1, 2)
    if endpoints.shape[0] == 0:
        return _zero_estimate(tolerance)
    verts, counts = np.unique(endpoints, return_counts=True)
    m = endpoints.shape[0]
    if m == verts.size - 1 and int(counts.max()) == verts.size - 1:
        return SpectralEstimate(math.sqrt(m), METHOD_STAR, 0, 0.0, tolerance, True)
    if max_iterations is None:
        max_iterations = max(4000, int(50 * verts.size * math.log(verts.size + 1)))
    lu = np.searchsorted(verts, endpoints[:, 0])
    lw = np.searchsorted(verts, endpoints[:, 1])
    size = verts.size
    data = np.ones(2 * m)
    mat = csr_matrix((data, (np.concatenate([lu, lw]), np.concatenate([lw, lu]))),
                     shape=(size, size))
    return _power_iteration_squared(mat, tolerance, max_iterations, seed)


def lambda_max_by_components(sample: SubgraphSample, tolerance: float = 1e-10,
                             seed: int = 0) -> SpectralEstimate:
    """lambda_max as the maximum over connected components.

    Equal to lambda_max(sample) within tolerance, but exact whenever the
    maximizing component is a star, which is the generic situation in the
    exponentially sparse families.
    """
    from .analysis import component_edge_endpoints, components

    if sample.edge_total == 0:
        return _zero_estimate(tolerance)
    census = components(sample)
    best: SpectralEstimate | None = None
    for comp, verts in zip(census.components, census.component_vertices):
        if comp.is_star:
            est = SpectralEstimate(math.sqrt(comp.edge_count), METHOD_STAR, 0, 0.0,
                                   tolerance, True)
        else:
            est = component_lambda_max(component_edge_endpoints(sample, verts),
                                       tolerance=tolerance, seed=seed)
        if best is None or est.value > best.value:
            best = est
    return best


def two_step_count(sample: SubgraphSample, x: int, target) -> int:
    """Number of 2-step walks from x landing in target minus x itself.

    This is sum over y in target, y != x, of (A^2)(x, y); common neighbors
    count with multiplicity.  target may be a container of vertex ids or a
    predicate on a vertex id.
    """
    member = _membership(target)
    total = 0
    for u in sample.neighbors_of(x):
        for y in sample.neighbors_of(int(u)):
            y = int(y)
            if y != x and member(y):
                total += 1
    return total


def _membership(target):
    if callable(target):
        return target
    ids = set(int(v) for v in np.asarray(list(target)).ravel()) if not isinstance(target, set) else target
    return lambda v: v in ids


def row_sum_A2(sample: SubgraphSample, x: int) -> int:
    """Full row sum of A^2 at x: the total degree of x's neighbors."""
    return int(sum(sample.degree_of(int(u)) for u in sample.neighbors_of(x)))


def row_sums_A2_all(sample: SubgraphSample) -> np.ndarray:
    """row_sum_A2 for every support vertex at once (one sparse matvec)."""
    if sample.support.size == 0:
        return np.empty(0, dtype=np.int64)
    return (sample.adjacency() @ sample.degrees.astype(np.float64)).astype(np.int64)


def eigenvalue_count_at_least(spectrum, bound: float) -> int:
    """Number of eigenvalues >= bound, with 1e-9 closed-comparison slack."""
    spec = np.asarray(spectrum, dtype=np.float64)
    return int(np.count_nonzero(spec >= bound - _COUNT_SLACK))


@dataclass(frozen=True)
class EigenvalueCountCertificate:
    """Witness that A^2 has at least certified_count eigenvalues >= rayleigh_floor.

    The family vertices are pairwise at graph distance > 2 in the sample, so
    their delta functions are orthonormal with (A^2 f_i, f_j) = 0 for i != j,
    and (A^2 f_x, f_x) equals the degree of x.
    """

    family_vertices: list[int]
    rayleigh_floor: float
    certified_count: int


def eigencount_certificate(sample: SubgraphSample, family) -> EigenvalueCountCertificate:
    """Build a certificate from vertices pairwise at sample distance > 2."""
    verts = [int(v) for v in family]
    if len(set(verts)) != len(verts):
        raise InvalidCertificateError("family vertices must be distinct")
    neighbor_sets = {v: set(int(u) for u in sample.neighbors_of(v)) for v in verts}
    for i, a in enumerate(verts):
        for b in verts[i + 1:]:
            if b in neighbor_sets[a]:
                raise InvalidCertificateError(f"vertices {a} and {b} are adjacent")
            if neighbor_sets[a] & neighbor_sets[b]:
                raise InvalidCertificateError(f"vertices {a} and {b} share a neighbor")
    if not verts:
        return EigenvalueCountCertificate([], 0.0, 0)
    floor = min(sample.degree_of(v) for v in verts)
    return EigenvalueCountCertificate(verts, float(floor), len(verts))


def select_distance3_family(sample: SubgraphSample, min_degree: int) -> list[int]:
    """Greedy thinning of {degree >= min_degree} to pairwise distance > 2.

    Vertices are scanned in ascending id order, so the family is a
    deterministic function of the sample.
    """
    candidates = sample.support[sample.degrees >= min_degree]
    chosen: list[int] = []
    chosen_sets: list[set[int]] = []
    chosen_ids: set[int] = set()
    for v in candidates:
        v = int(v)
        nbrs = set(int(u) for u in sample.neighbors_of(v))
        ok = True
        for w, wn in zip(chosen, chosen_sets):
            if v in wn or w in nbrs or (nbrs & wn):
                ok = False
                break
        if ok:
            chosen.append(v)
            chosen_sets.append(nbrs)
            chosen_ids.add(v)
    return chosen


@dataclass(frozen=True)
class DecompositionResult:
    """Six per-part estimates and the whole-graph value they must dominate."""

    parts: list[SpectralEstimate]
    whole: SpectralEstimate
    bound_holds: bool


def decomposition_bound(sample: SubgraphSample, partition, tolerance: float = 1e-8,
                        seed: int = 0) -> DecompositionResult:
    """Check lambda_max(G) <= sum of lambda_max over the six split subgraphs.

    The split takes the three induced subgraphs on the partition classes plus
    the three bipartite subgraphs between distinct classes.  Dense reference
    eigensolves are used when 2**n fits in the dense cap, power iteration
    otherwise.  The inequality is asserted with slack 6 * tolerance.
    """
    if partition.support.size != sample.support.size or \
            np.any(partition.support != sample.support):
        raise DomainError("partition does not cover this sample's vertices")
    labels = partition.labels
    lu = np.searchsorted(sample.support, sample.endpoints[:, 0])
    lw = np.searchsorted(sample.support, sample.endpoints[:, 1])
    cu = labels[lu]
    cw = labels[lw]
    pairs = [(1, 1), (2, 2), (3, 3), (1, 2), (1, 3), (2, 3)]
    dense_ok = (1 << sample.n) <= DENSE_VERTEX_CAP
    estimates = []
    for a, b in pairs:
        if a == b:
            mask = (cu == a) & (cw == a)
        else:
            mask = ((cu == a) & (cw == b)) | ((cu == b) & (cw == a))
        estimates.append(_edge_set_lambda(sample.endpoints[mask], dense_ok, tolerance,
                                          seed, sample.n))
    whole = _edge_set_lambda(sample.endpoints, dense_ok, tolerance, seed, sample.n)
    bound = sum(e.value for e in estimates) + 6.0 * tolerance
    return DecompositionResult(estimates, whole, whole.value <= bound)


def _edge_set_lambda(endpoints: np.ndarray, dense_ok: bool, tolerance: float,
                     seed: int, n: int) -> SpectralEstimate:
    if endpoints.shape[0] == 0:
        return _zero_estimate(tolerance, METHOD_DENSE if dense_ok else METHOD_POWER)
    if dense_ok:
        top = float(_dense_eigenvalues(endpoints)[-1])
        return SpectralEstimate(top, METHOD_DENSE, 0, 0.0, tolerance, True)
    verts = np.unique(endpoints)
    lu = np.searchsorted(verts, endpoints[:, 0])
    lw = np.searchsorted(verts, endpoints[:, 1])
    m = endpoints.shape[0]
    mat = csr_matrix((np.ones(2 * m), (np.concatenate([lu, lw]), np.concatenate([lw, lu]))),
                     shape=(verts.size, verts.size))
    budget = max(default_max_iterations(n), 4000)
    return _power_iteration_squared(mat, tolerance, budget, seed)


def write_spectrum(path, spectrum) -> None:
    """Dump eigenvalues one per line, descending, 17 significant digits."""
    spec = np.asarray(spectrum, dtype=np.float64)
    with open(path, "w", encoding="ascii") as fh:
        for value in spec:
            fh.write(f"{value:.17g}\n")
