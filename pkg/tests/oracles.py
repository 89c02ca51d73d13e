"""Slow, independent reference computations used to check the fast paths."""

from collections import deque
from itertools import combinations

import networkx as nx
import numpy as np


def mutual_nearest_pairs(M):
    """All reciprocal nearest-neighbor pairs of a dense matrix, by full scan."""
    M = np.array(M, dtype=float)
    np.fill_diagonal(M, np.inf)
    n = len(M)
    nn = [int(np.argmin(M[i])) if np.isfinite(M[i]).any() else -1 for i in range(n)]
    return {(min(i, j), max(i, j)) for i, j in enumerate(nn) if j >= 0 and nn[j] == i}


def bfs_depth(sct, node):
    """Depth as half of (BFS distance to p + BFS distance to q + 1)."""
    adj = {}
    for a, b in sct.edges():
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)

    def bfs(src, dst):
        dist = {src: 0}
        q = deque([src])
        while q:
            v = q.popleft()
            if v == dst:
                return dist[v]
            for w in adj.get(v, ()):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    q.append(w)
        raise AssertionError("unreachable")

    p, q = sct.supporting_pair
    return (bfs(node, p) + bfs(node, q) + 1) / 2


def rand_index_pairs(x, y):
    """Rand index counts by enumerating every pair; returns (a, b, c, d)."""
    x = list(x)
    y = list(y)
    a = b = c = d = 0
    for i, j in combinations(range(len(x)), 2):
        sx, sy = x[i] == x[j], y[i] == y[j]
        if sx and sy:
            a += 1
        elif not sx and not sy:
            b += 1
        elif sx:
            c += 1
        else:
            d += 1
    return a, b, c, d


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from((u, v) for u, v, _ in g.edges)
    return h


def enumerate_betweenness(g):
    """Node and edge betweenness by listing every shortest path of every pair."""
    h = to_nx(g)
    node = {i: 0.0 for i in range(g.n)}
    edge = {e: 0.0 for e in g.edge_keys()}
    for s, t in combinations(range(g.n), 2):
        if not nx.has_path(h, s, t):
            continue
        paths = list(nx.all_shortest_paths(h, s, t))
        for path in paths:
            for v in path[1:-1]:
                node[v] += 1.0 / len(paths)
            for a, b in zip(path, path[1:]):
                edge[(min(a, b), max(a, b))] += 1.0 / len(paths)
    return node, edge


def enumerate_tpr(g, clusters):
    vals = []
    for c in clusters:
        cs = set(c)
        hit = set()
        for u, v, w in combinations(sorted(cs), 3):
            if g.has_edge(u, v) and g.has_edge(u, w) and g.has_edge(v, w):
                hit.update((u, v, w))
        vals.append(len(hit) / len(cs))
    return float(np.mean(vals))
