from itertools import product

import numpy as np
import pytest
from scipy.cluster.hierarchy import linkage
from scipy.spatial.distance import pdist

from rsclust import average_linkage, euclidean_oracle, group_average, matrix_oracle
from rsclust.baselines import partition_from_merges, to_linkage_matrix
from rsclust.distance import graph_oracle
from rsclust.errors import BadK, InfiniteDistance


def test_k_equals_n_is_singletons():
    p = group_average(euclidean_oracle(np.arange(5.0).reshape(-1, 1)), 5)
    assert p.k == 5


def test_two_tight_pairs():
    pts = np.array([[0.0], [0.1], [10.0], [10.1]])
    p = group_average(euclidean_oracle(pts), 2)
    assert sorted(map(sorted, p.clusters())) == [[0, 1], [2, 3]]


def test_k_one():
    assert group_average(euclidean_oracle(np.random.default_rng(0).random((30, 2))), 1).k == 1


@pytest.mark.parametrize("k", [0, 6])
def test_bad_k(k):
    with pytest.raises(BadK):
        group_average(euclidean_oracle(np.zeros((5, 1)) + np.arange(5)[:, None]), k)


def test_infinite_distance_rejected():
    with pytest.raises(InfiniteDistance):
        average_linkage(graph_oracle([[0, np.inf], [np.inf, 0]]))


def _replay(D, merges):
    """Check each merge is a global minimum of the mean cross distance."""
    clusters = {i: [i] for i in range(len(D))}
    for m in merges:
        names = sorted(clusters)
        best = min(D[np.ix_(clusters[a], clusters[b])].mean()
                   for a, b in product(names, names) if a < b)
        link = D[np.ix_(clusters[m.left], clusters[m.right])].mean()
        assert link == pytest.approx(m.distance, rel=1e-9, abs=1e-12)
        assert m.distance <= best * (1 + 1e-9) + 1e-12
        clusters[m.left] += clusters.pop(m.right)


@pytest.mark.parametrize("seed", range(6))
def test_each_merge_is_global_mean_minimum(seed):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(int(rng.integers(5, 40)), 3))
    o = euclidean_oracle(pts)
    _replay(o.to_matrix(), average_linkage(o))


def test_ties_on_lattice():
    pts = np.array([[x, y] for x in range(4) for y in range(3)], dtype=float)
    o = euclidean_oracle(pts)
    merges = average_linkage(o)
    _replay(o.to_matrix(), merges)
    # the very first tie is broken by the smallest pair of names
    assert (merges[0].left, merges[0].right) == (0, 1)


@pytest.mark.parametrize("seed", range(5))
def test_matches_scipy(seed):
    rng = np.random.default_rng(seed)
    pts = rng.random((int(rng.integers(10, 120)), 4))
    merges = average_linkage(euclidean_oracle(pts))
    Z = linkage(pdist(pts), "average")
    assert np.allclose([m.distance for m in merges], Z[:, 2], rtol=1e-9)
    ours = to_linkage_matrix(len(pts), merges)
    assert np.array_equal(ours[:, 3], Z[:, 3])


def test_partitions_nest():
    rng = np.random.default_rng(9)
    o = matrix_oracle(euclidean_oracle(rng.random((25, 2))).to_matrix())
    merges = average_linkage(o)
    parts = [partition_from_merges(25, merges, k) for k in range(25, 0, -1)]
    assert [p.k for p in parts] == list(range(25, 0, -1))
    assert all(b.is_coarsening_of(a) for a, b in zip(parts, parts[1:]))
