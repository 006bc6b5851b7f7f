import numpy as np
import pytest

from qcube import hypercube
from qcube.errors import DegenerateDecompositionError, DomainError


def test_neighbors_of_zero():
    assert hypercube.neighbors(0b000, 3) == [1, 2, 4]


def test_neighbors_complement():
    assert set(hypercube.neighbors(0b11, 2)) == {1, 2}


def test_neighbors_enumerated_xor():
    # oracle: XOR v with each power of two
    v, n = 5, 4
    expected = sorted(v ^ (1 << i) for i in range(n))
    assert sorted(hypercube.neighbors(v, n)) == expected == [1, 4, 7, 13]


def test_neighbors_properties_random_vertices():
    rng = np.random.RandomState(0)
    for n in range(1, 13):
        for v in rng.randint(0, 1 << n, size=20):
            nbrs = hypercube.neighbors(int(v), n)
            assert len(nbrs) == n
            assert len(set(nbrs)) == n
            for u in nbrs:
                assert bin(u ^ int(v)).count("1") == 1
                # symmetry of the neighbor relation
                assert int(v) in hypercube.neighbors(u, n)


def test_neighbors_domain_errors():
    with pytest.raises(DomainError):
        hypercube.neighbors(8, 3)
    with pytest.raises(DomainError):
        hypercube.neighbors(0, 0)
    with pytest.raises(DomainError):
        hypercube.neighbors(0, 31)


@pytest.mark.parametrize("n,expected", [(1, 1), (4, 32), (10, 5120)])
def test_edge_count(n, expected):
    assert hypercube.edge_count(n) == expected
    assert hypercube.edge_count(n) == n * 2 ** (n - 1)


def test_encode_first_edge():
    assert hypercube.encode_edge(0, 0, 2) == 0
    assert hypercube.decode_edge(0, 2) == (0, 1)


def test_decode_last_edge_n3():
    # oracle: enumerate all (v, i) pairs with bit i clear in lexicographic order
    pairs = [(v, i) for v in range(8) for i in range(3) if not (v >> i) & 1]
    v, i = pairs[-1]
    assert hypercube.decode_edge(hypercube.edge_count(3) - 1, 3) == (v, v | (1 << i))
    assert hypercube.decode_edge(11, 3) == (6, 7)


def test_encode_decode_roundtrip_exhaustive_n4():
    n = 4
    seen = set()
    for v in range(16):
        for i in range(4):
            if (v >> i) & 1:
                continue
            e = hypercube.encode_edge(v, i, n)
            assert 0 <= e < hypercube.edge_count(n)
            assert e not in seen
            seen.add(e)
            assert hypercube.decode_edge(e, n) == (v, v | (1 << i))
    assert len(seen) == hypercube.edge_count(n)


@pytest.mark.parametrize("n", [1, 3, 5, 8])
def test_decode_matches_lexicographic_enumeration(n):
    pairs = [(v, i) for v in range(1 << n) for i in range(n) if not (v >> i) & 1]
    for e, (v, i) in enumerate(pairs):
        assert hypercube.decode_edge(e, n) == (v, v | (1 << i))
        assert hypercube.encode_edge(v, i, n) == e


def test_vectorized_decode_encode_agree_with_scalar():
    for n in (3, 6, 11):
        ids = np.arange(hypercube.edge_count(n), dtype=np.int64)
        u, w = hypercube.decode_edges(ids, n)
        for e in range(0, ids.size, max(1, ids.size // 97)):
            su, sw = hypercube.decode_edge(int(e), n)
            assert (u[e], w[e]) == (su, sw)
        back = hypercube.encode_edges(u, w, n)
        np.testing.assert_array_equal(back, ids)


def test_decode_edges_large_dimension_bisection_path():
    # n above the table cap exercises the vectorized bisection branch
    n = 24
    ids = np.array([0, 1, 12345678, hypercube.edge_count(n) - 1], dtype=np.int64)
    u, w = hypercube.decode_edges(ids, n)
    for e, uu, ww in zip(ids, u, w):
        assert hypercube.decode_edge(int(e), n) == (int(uu), int(ww))


def test_encode_rejects_set_bit_and_bad_ranges():
    with pytest.raises(DomainError):
        hypercube.encode_edge(1, 0, 2)  # bit 0 of 1 is set
    with pytest.raises(DomainError):
        hypercube.decode_edge(hypercube.edge_count(3), 3)
    with pytest.raises(DomainError):
        hypercube.encode_edge(0, 5, 3)


def test_popcount_below_matches_bruteforce():
    for v in list(range(200)) + [1023, 4096, 123456]:
        assert hypercube.popcount_below(v) == sum(bin(w).count("1") for w in range(v))


def test_subcube_decompose_counts():
    subs = hypercube.subcube_decompose(4, 0.5)
    assert len(subs) == 4
    assert all(s.free_dimension == 2 for s in subs)

    subs = hypercube.subcube_decompose(10, 0.3)
    assert len(subs) == 8
    assert all(s.free_dimension == 7 for s in subs)


def test_subcube_decompose_partitions_vertices():
    for n, alpha in [(6, 0.5), (5, 0.21), (8, 0.9)]:
        subs = hypercube.subcube_decompose(n, alpha)
        owners = np.zeros(1 << n, dtype=int)
        for s in subs:
            lo, hi = s.vertex_range()
            for v in range(lo, hi):
                assert s.contains(v)
                owners[v] += 1
        np.testing.assert_array_equal(owners, 1)


def test_subcube_decompose_degenerate():
    with pytest.raises(DegenerateDecompositionError):
        hypercube.subcube_decompose(4, 0.1)
    with pytest.raises(DomainError):
        hypercube.subcube_decompose(4, 1.5)
