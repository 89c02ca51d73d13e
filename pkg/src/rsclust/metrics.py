"""Evaluation metrics: Rand Index, betweenness centrality, triangle participation."""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import MismatchedEntities
from .graph import Graph
from .hierarchy import Partition

__all__ = [
    "PairCounts",
    "pair_counts",
    "rand_index",
    "betweenness_node",
    "betweenness_edge",
    "tpr",
    "community_tpr",
]


@dataclass(frozen=True)
class PairCounts:
    """Pair counts between partitions ``x`` and ``y``.

    a: same in both; b: different in both; c: same in x only; d: same in y only.
    """

    a: int
    b: int
    c: int
    d: int

    @property
    def total(self) -> int:
        return self.a + self.b + self.c + self.d


def _labels(p):
    return p.labels if isinstance(p, Partition) else np.asarray(p)


def _pairs(counts) -> int:
    counts = np.asarray(counts, dtype=np.int64)
    return int((counts * (counts - 1) // 2).sum())


def pair_counts(x, y) -> PairCounts:
    """Contingency-table pair counts, O(n + nonzero cells)."""
    lx, ly = _labels(x), _labels(y)
    if lx.shape != ly.shape:
        raise MismatchedEntities(f"partitions cover {len(lx)} and {len(ly)} entities")
    n = len(lx)
    _, ix = np.unique(lx, return_inverse=True)
    _, iy = np.unique(ly, return_inverse=True)
    ix, iy = ix.ravel(), iy.ravel()
    _, cell = np.unique(ix.astype(np.int64) * (iy.max(initial=0) + 1) + iy, return_counts=True)
    a = _pairs(cell)
    same_x = _pairs(np.bincount(ix))
    same_y = _pairs(np.bincount(iy))
    total = n * (n - 1) // 2
    c = same_x - a
    d = same_y - a
    return PairCounts(a, total - a - c - d, c, d)


def rand_index(x, y) -> float:
    """Fraction of entity pairs on which ``x`` and ``y`` agree."""
    pc = pair_counts(x, y)
    if pc.total == 0:
        raise ValueError("rand index needs at least two entities")
    return (pc.a + pc.b) / pc.total


# -- betweenness -----------------------------------------------------------------

def _sssp_hops(g, s, nodes_ok):
    order, preds, sigma = [], {s: []}, {s: 1}
    dist = {s: 0}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        order.append(v)
        dv = dist[v] + 1
        for w in g.adj[v]:
            if nodes_ok is not None and w not in nodes_ok:
                continue
            if w not in dist:
                dist[w] = dv
                sigma[w] = 0
                preds[w] = []
                queue.append(w)
            if dist[w] == dv:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return order, preds, sigma


def _sssp_weighted(g, s, nodes_ok):
    # path length of an edge is 1 / weight
    order, preds, sigma = [], {s: []}, {s: 1}
    dist = {}
    seen = {s: 0.0}
    heap = [(0.0, s, s)]
    count = 0
    while heap:
        d, _, v = heapq.heappop(heap)
        if v in dist:
            continue
        dist[v] = d
        order.append(v)
        for w, wt in g.adj[v].items():
            if nodes_ok is not None and w not in nodes_ok:
                continue
            vw = d + 1.0 / wt
            if w not in dist and (w not in seen or vw < seen[w]):
                seen[w] = vw
                count += 1
                heapq.heappush(heap, (vw, count, w))
                sigma[w] = sigma[v]
                preds[w] = [v]
            elif vw == seen.get(w):
                sigma[w] += sigma[v]
                preds[w].append(v)
    return order, preds, sigma


def _brandes(g: Graph, sources=None, weighted=False):
    """Node and edge dependencies summed over ordered source/target pairs."""
    nodes_ok = None if sources is None else set(sources)
    sources = range(g.n) if sources is None else sources
    node_bc = [0.0] * g.n
    edge_bc: dict[tuple[int, int], float] = {}
    sssp = _sssp_weighted if weighted else _sssp_hops
    for s in sources:
        order, preds, sigma = sssp(g, s, nodes_ok)
        delta = dict.fromkeys(order, 0.0)
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                c = sigma[v] * coeff
                key = (v, w) if v < w else (w, v)
                edge_bc[key] = edge_bc.get(key, 0.0) + c
                delta[v] += c
            if w != s:
                node_bc[w] += delta[w]
    return node_bc, edge_bc


def betweenness_node(g: Graph, weighted=False) -> dict[int, float]:
    """Sum over unordered pairs {s, t} (both not i) of the share of s-t shortest paths through i.

    Path lengths are hop counts unless ``weighted`` (length ``1 / weight``).
    """
    node_bc, _ = _brandes(g, weighted=weighted)
    return {i: v / 2.0 for i, v in enumerate(node_bc)}


def betweenness_edge(g: Graph, weighted=False, nodes=None) -> dict[tuple[int, int], float]:
    """Edge analogue of node betweenness; endpoints count as s or t.

    ``nodes`` restricts the computation to the subgraph induced on them
    (used for per-component updates).
    """
    _, edge_bc = _brandes(g, sources=nodes, weighted=weighted)
    keys = g.edge_keys() if nodes is None else [
        (u, v) for u in nodes for v in g.adj[u] if u < v]
    return {e: edge_bc.get(e, 0.0) / 2.0 for e in keys}


# -- triangle participation ------------------------------------------------------

def community_tpr(g: Graph, members) -> float:
    """Share of ``members`` lying on a triangle whose three nodes are all members."""
    members = set(members)
    if not members:
        return 0.0
    hit = 0
    for u in members:
        nb = [v for v in g.adj[u] if v in members]
        found = False
        for i, v in enumerate(nb):
            av = g.adj[v]
            for w in nb[i + 1:]:
                if w in av:
                    found = True
                    break
            if found:
                break
        hit += found
    return hit / len(members)


def tpr(g: Graph, p) -> float:
    """Mean triangle participation ratio over the communities of ``p``."""
    part = p if isinstance(p, Partition) else Partition(p)
    if len(part) != g.n:
        raise MismatchedEntities("partition does not cover the graph's nodes")
    comms = part.clusters()
    return float(np.mean([community_tpr(g, c) for c in comms]))
