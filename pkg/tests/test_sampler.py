import math

import numpy as np
import pytest
from scipy.stats import chi2_contingency

from qcube import hypercube, sampler
from qcube.errors import DomainError


def test_p_zero_empty():
    s = sampler.sample_subgraph(3, 0.0, 42)
    assert s.edge_total == 0
    assert s.support.size == 0


def test_p_one_full_cube():
    s = sampler.sample_subgraph(3, 1.0, 42)
    assert s.edge_total == 12
    np.testing.assert_array_equal(s.edges, np.arange(12))
    assert all(s.degree_of(v) == 3 for v in range(8))


def test_determinism_identical_samples():
    for p in (0.003, 0.08, 0.6):
        a = sampler.sample_subgraph(9, p, 777)
        b = sampler.sample_subgraph(9, p, 777)
        np.testing.assert_array_equal(a.edges, b.edges)
        np.testing.assert_array_equal(a.neighbor_local, b.neighbor_local)


def test_mean_edge_count_matches_binomial():
    # binomial mean/variance oracle: 1000 seeds at n=10, p=0.01
    n, p, seeds = 10, 0.01, 1000
    total = hypercube.edge_count(n)
    counts = np.array([sampler.sample_edge_ids(n, p, s).size for s in range(seeds)])
    target = p * total
    se = math.sqrt(total * p * (1 - p) / seeds)
    assert abs(counts.mean() - target) <= 3 * se


def test_expected_edge_count():
    assert sampler.expected_edge_count(2, 0.5) == 2.0
    assert sampler.expected_edge_count(4, 1.0) == 32
    # nu/(n*2^n) family with nu=1 gives expected count 1/2 at any n
    n = 12
    p = 1.0 / (n * 2.0**n)
    assert sampler.expected_edge_count(n, p) == pytest.approx(0.5)


@pytest.mark.parametrize("n,p,strategy", [(6, 0.02, "sparse"), (3, 0.35, "dense")])
def test_per_edge_inclusion_frequency(n, p, strategy):
    """Each individual edge id appears with frequency p, within 4 SE."""
    total = hypercube.edge_count(n)
    seeds = 10_000
    hits = np.zeros(total)
    for s in range(seeds):
        ids = sampler.sample_edge_ids(n, p, s, strategy=strategy)
        hits[ids] += 1
    freq = hits / seeds
    se = math.sqrt(p * (1 - p) / seeds)
    assert np.max(np.abs(freq - p)) <= 4 * se


def test_auto_strategy_switch_is_where_documented():
    # expected count below 2**n/8 -> sparse (pure function of (n, p))
    n, total = 6, hypercube.edge_count(6)
    p_sparse = (2**6 / 8 - 1) / total
    p_dense = (2**6 / 8 + 1) / total
    a = sampler.sample_edge_ids(n, p_sparse, 5)
    b = sampler.sample_edge_ids(n, p_sparse, 5, strategy="sparse")
    np.testing.assert_array_equal(a, b)
    c = sampler.sample_edge_ids(n, p_dense, 5)
    d = sampler.sample_edge_ids(n, p_dense, 5, strategy="dense")
    np.testing.assert_array_equal(c, d)


def test_strategies_agree_in_distribution():
    """Two-sample chi-square on edge-count histograms must not reject."""
    n, p, runs = 5, 0.05, 4000
    sparse = np.array([sampler.sample_edge_ids(n, p, s, strategy="sparse").size
                       for s in range(runs)])
    dense = np.array([sampler.sample_edge_ids(n, p, 10_000_000 + s, strategy="dense").size
                      for s in range(runs)])
    hi = int(max(sparse.max(), dense.max()))
    h1 = np.bincount(sparse, minlength=hi + 1)
    h2 = np.bincount(dense, minlength=hi + 1)
    # pool sparse bins so expected counts are reasonable
    keep = (h1 + h2) >= 10
    t1 = np.append(h1[keep], h1[~keep].sum())
    t2 = np.append(h2[keep], h2[~keep].sum())
    mask = (t1 + t2) > 0
    _, p_value, _, _ = chi2_contingency(np.vstack([t1[mask], t2[mask]]))
    assert p_value > 0.01


def test_binomial_rejection_path_mean():
    """Force the rejection sampler (mean >= 100) and compare moments."""
    total, p = 4000, 0.05  # mean 200
    from qcube._rng import U64Stream

    draws = np.array([sampler._binomial_rejection(total, p, U64Stream(s))
                      for s in range(4000)])
    mean, var = total * p, total * p * (1 - p)
    assert abs(draws.mean() - mean) <= 4 * math.sqrt(var / draws.size)
    assert abs(draws.var() - var) <= 6 * var / math.sqrt(draws.size)


def test_monotone_coupling_subsets():
    ps = [0.01, 0.05, 0.2, 0.8]
    for seed in range(20):
        sets = sampler.coupled_edge_ids(6, ps, seed)
        for small, big in zip(sets, sets[1:]):
            assert set(small.tolist()) <= set(big.tolist())


def test_sample_invariants():
    for seed in range(10):
        s = sampler.sample_subgraph(7, 0.06, seed)
        assert np.all(np.diff(s.edges) > 0)
        u, w = s.endpoints[:, 0], s.endpoints[:, 1]
        assert np.all(u < w)
        # every decoded edge is a cube edge
        x = u ^ w
        assert np.all((x & (x - 1)) == 0)
        # adjacency symmetric and consistent with the edge list
        assert s.neighbor_local.size == 2 * s.edge_total
        for v in s.support[:5]:
            for nb in s.neighbors_of(int(v)):
                assert int(v) in s.neighbors_of(int(nb)).tolist()


def test_edge_probability_log_consistency():
    for p in (1e-9, 0.25, 0.999):
        ep = sampler.EdgeProbability.of(p)
        assert math.exp(ep.log_p) == pytest.approx(p, rel=1e-12)
        assert math.exp(ep.log_1mp) == pytest.approx(1 - p, rel=1e-12)
    assert sampler.EdgeProbability.of(0.0).log_p == -math.inf
    assert sampler.EdgeProbability.of(1.0).log_1mp == -math.inf
    with pytest.raises(DomainError):
        sampler.EdgeProbability.of(1.5)


def test_edge_list_roundtrip(tmp_path):
    s = sampler.sample_subgraph(6, 0.1, 99)
    path = tmp_path / "sample.edges"
    sampler.write_edge_list(s, path)
    r = sampler.read_edge_list(path)
    assert (r.n, r.seed) == (s.n, s.seed)
    assert r.p.p == s.p.p
    np.testing.assert_array_equal(r.edges, s.edges)

    header = path.read_text().splitlines()[0]
    assert header.startswith("cube-subgraph v1 n=6 p=0.1 seed=99")


def test_edge_list_reader_validation(tmp_path):
    path = tmp_path / "bad.edges"
    path.write_text("not a header\n")
    with pytest.raises(DomainError):
        sampler.read_edge_list(path)

    path.write_text("cube-subgraph v1 n=3 p=0.5 seed=0\n1 0\n")
    with pytest.raises(DomainError):
        sampler.read_edge_list(path)  # u >= v

    path.write_text("cube-subgraph v1 n=3 p=0.5 seed=0\n0 3\n")
    with pytest.raises(DomainError):
        sampler.read_edge_list(path)  # not a cube edge

    path.write_text("cube-subgraph v1 n=3 p=0.5 seed=0\n0 2\n0 1\n")
    with pytest.raises(DomainError):
        sampler.read_edge_list(path)  # edge ids out of order


def test_sample_from_endpoints_and_duplicates():
    s = sampler.sample_from_endpoints(3, [(0, 1), (0, 2)])
    assert s.edge_total == 2
    assert s.degree_of(0) == 2
    with pytest.raises(DomainError):
        sampler.sample_from_endpoints(3, [(0, 1), (0, 1)])
    with pytest.raises(DomainError):
        sampler.sample_from_endpoints(3, [(0, 3)])


def test_domain_errors():
    with pytest.raises(DomainError):
        sampler.sample_subgraph(3, -0.1, 0)
    with pytest.raises(DomainError):
        sampler.sample_subgraph(31, 0.5, 0)
