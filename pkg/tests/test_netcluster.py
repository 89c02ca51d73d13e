import math

import numpy as np
import pytest
from conftest import bridged_triangles, path_graph, random_connected_graph, random_tree, triangle
from oracles import enumerate_betweenness

from rsclust import (
    Graph,
    JitterConfig,
    Partition,
    RsConfig,
    absorb_small,
    commute_distance,
    detect_communities,
    girvan_newman,
    laplacian,
    pseudo_inverse,
    resolution_scan,
)
from rsclust.errors import DisconnectedGraph
from rsclust.netcluster import girvan_newman_trace


def cycle_graph(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def test_laplacian_examples():
    assert laplacian(Graph(2, [(0, 1)])).tolist() == [[1, -1], [-1, 1]]
    L = laplacian(triangle())
    assert np.array_equal(L, 3 * np.eye(3) - np.ones((3, 3)))
    assert laplacian(Graph(2, [(0, 1, 3.0)])).tolist() == [[3, -3], [-3, 3]]


def test_pseudo_inverse_single_edge():
    Lp = pseudo_inverse(laplacian(Graph(2, [(0, 1)])))
    assert np.allclose(Lp, [[0.25, -0.25], [-0.25, 0.25]], atol=1e-15)


@pytest.mark.parametrize("seed", range(20))
def test_moore_penrose_conditions(seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, int(rng.integers(2, 51)), p=0.1)
    L = laplacian(g)
    P = pseudo_inverse(L)
    assert np.allclose(L @ P @ L, L, atol=1e-8, rtol=0)
    assert np.allclose(P @ L @ P, P, atol=1e-8, rtol=0)
    assert np.allclose(L @ P, (L @ P).T, atol=1e-8, rtol=0)
    assert np.allclose(P @ L, (P @ L).T, atol=1e-8, rtol=0)
    assert np.allclose(P.sum(axis=1), 0, atol=1e-9)
    assert np.allclose(P, np.linalg.pinv(L), atol=1e-8)


def test_pseudo_inverse_disconnected():
    with pytest.raises(DisconnectedGraph):
        pseudo_inverse(laplacian(Graph(4, [(0, 1), (2, 3)])))


def test_commute_single_edge():
    assert commute_distance(Graph(2, [(0, 1)]))(0, 1) == pytest.approx(math.sqrt(2), abs=1e-12)


def test_commute_triangle():
    D = commute_distance(triangle())
    assert D(0, 1) == pytest.approx(2.0, abs=1e-12)
    assert D.kind == "graph"


def test_commute_nonadjacent_infinite():
    D = commute_distance(path_graph(4))
    assert math.isinf(D(0, 2)) and math.isinf(D(0, 3))
    M = D.to_matrix()
    assert np.array_equal(M, M.T) and np.all(np.diag(M) == 0)


@pytest.mark.parametrize("n", [2, 3, 5, 9])
def test_commute_series_and_parallel(n):
    # path: every edge is a unit resistor in series with nothing parallel
    D = commute_distance(path_graph(n))
    vol = 2 * (n - 1)
    assert D(0, 1) == pytest.approx(math.sqrt(vol * 1.0), rel=1e-8)
    if n >= 3:
        # cycle: one unit resistor in parallel with n-1 in series
        C = commute_distance(cycle_graph(n))
        r = 1.0 * (n - 1) / n
        assert C(0, 1) == pytest.approx(math.sqrt(2 * n * r), rel=1e-8)


def test_commute_weighted_edge():
    # conductance 4: resistance 1/4, volume 8
    assert commute_distance(Graph(2, [(0, 1, 4.0)]))(0, 1) == pytest.approx(math.sqrt(2.0), abs=1e-12)


def test_commute_per_component():
    g = Graph(5, [(0, 1), (2, 3), (3, 4), (2, 4)])
    D = commute_distance(g)
    assert D(0, 1) == pytest.approx(math.sqrt(2), abs=1e-12)
    assert D(2, 3) == pytest.approx(2.0, abs=1e-12)
    assert math.isinf(D(1, 2))


def _cfg(seed):
    return RsConfig(seed=seed, jitter=JitterConfig(seed=seed))


@pytest.mark.parametrize("seed", range(10))
def test_triangle_is_one_community(seed):
    assert detect_communities(triangle(), _cfg(seed)).k == 1


@pytest.mark.parametrize("seed", range(10))
def test_bridged_triangles_two_communities(seed):
    p = detect_communities(bridged_triangles(), _cfg(seed))
    assert sorted(map(sorted, p.clusters())) == [[0, 1, 2], [3, 4, 5]]


def test_absorb_singleton_joins_only_neighbor():
    g = Graph(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    p = absorb_small(g, Partition([0, 0, 0, 1]), commute_distance(g))
    assert p.k == 1


def test_absorb_noop_when_all_big():
    g = bridged_triangles()
    p = Partition([0, 0, 0, 1, 1, 1])
    assert absorb_small(g, p, commute_distance(g)) == p


def test_absorb_splits_pair_per_node():
    g = Graph(8, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 6), (6, 7), (7, 3)])
    p = absorb_small(g, Partition([0, 0, 0, 1, 1, 1, 2, 2]), commute_distance(g))
    assert sorted(map(sorted, p.clusters())) == [[0, 1, 2, 6], [3, 4, 5, 7]]


def test_absorb_leaves_unreachable_nodes():
    g = Graph(5, [(0, 1), (1, 2), (0, 2), (3, 4)])
    p = absorb_small(g, Partition([0, 0, 0, 1, 1]), commute_distance(g))
    assert sorted(map(sorted, p.clusters())) == [[0, 1, 2], [3, 4]]


def test_absorb_uses_nearest_member_distance():
    # node 6 touches both triangles; ties in structure are broken by distance
    g = Graph(7, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (6, 0), (6, 3), (6, 4)])
    D = commute_distance(g)
    p = absorb_small(g, Partition([0, 0, 0, 1, 1, 1, 2]), D)
    cand = {0: D(6, 0), 1: min(D(6, 3), D(6, 4))}
    winner = min(cand, key=cand.get)
    assert p.labels[6] == p.labels[3 * winner]


def test_scan_single_bridge():
    g = bridged_triangles()
    s = resolution_scan(g, Partition([0, 0, 0, 1, 1, 1]))
    assert [e for e, _ in s.merges] == [(2, 3)]
    assert s.merges[-1][1].k == 1


@pytest.mark.parametrize("seed", range(8))
def test_scan_picks_min_betweenness(seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, 12, p=0.25)
    labels = np.array(rng.integers(0, 4, size=g.n))
    p = Partition(labels)
    s = resolution_scan(g, p)
    _, eb = enumerate_betweenness(g)
    assert len(s.merges) == p.k - 1
    cur = p.labels.copy()
    prev = p
    for (u, v), part in s.merges:
        inter = [e for e in eb if cur[e[0]] != cur[e[1]]]
        assert eb[(u, v)] <= min(eb[e] for e in inter) + 1e-9
        assert part.is_coarsening_of(prev) and part.k == prev.k - 1
        cur = part.labels.copy()
        prev = part


def test_scan_stops_without_inter_edges():
    g = Graph(4, [(0, 1), (2, 3)])
    s = resolution_scan(g, Partition([0, 0, 1, 1]))
    assert s.merges == []


def test_gn_bridged_triangles():
    tr = girvan_newman_trace(bridged_triangles())
    assert tr.removed[0] == (2, 3)
    assert tr.at_removal[0] == 0
    assert sorted(map(sorted, tr.partitions[0].clusters())) == [[0, 1, 2], [3, 4, 5]]


def test_gn_triangle_tie_rule():
    tr = girvan_newman_trace(triangle())
    assert tr.removed[0] == (0, 1)


@pytest.mark.parametrize("seed", range(5))
def test_gn_tree(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 15))
    parts = girvan_newman(random_tree(rng, n))
    assert [p.k for p in parts] == list(range(2, n + 1))
    for a, b in zip(parts, parts[1:]):
        assert a.is_coarsening_of(b)


def test_gn_matches_full_recompute(rng):
    # incremental per-component updates agree with recomputing from scratch
    from rsclust.metrics import betweenness_edge
    from rsclust.netcluster import _pick

    g = random_connected_graph(rng, 14, p=0.25)
    tr = girvan_newman_trace(g)
    work = g.copy()
    for e in tr.removed:
        eb = betweenness_edge(work)
        assert _pick(eb, eb.keys(), largest=True) == e
        work.remove_edge(*e)
