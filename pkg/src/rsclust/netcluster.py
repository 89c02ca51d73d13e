"""Community detection: RS over commute-time distances, plus Girvan-Newman.

Adjacent nodes are at distance ``sqrt(V_G * (l+_ii + l+_jj - 2 l+_ij))`` where
``l+`` is the Laplacian pseudoinverse and ``V_G`` the total (weighted) degree
of the component; non-adjacent nodes are infinitely far apart, so RS stops
once no two roots are adjacent.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .distance import MatrixOracle
from .errors import DisconnectedGraph
from .graph import Graph
from .hierarchy import Partition, RsConfig, cluster
from .metrics import betweenness_edge

__all__ = [
    "laplacian",
    "pseudo_inverse",
    "commute_distance",
    "detect_communities",
    "absorb_small",
    "CommunitySeries",
    "resolution_scan",
    "girvan_newman",
    "girvan_newman_trace",
    "GnTrace",
]

_TIE_RTOL = 1e-9


def laplacian(g: Graph) -> np.ndarray:
    """``L = D - A`` with weighted degrees on the diagonal."""
    if g.n == 0:
        raise ValueError("graph is empty")
    L = np.zeros((g.n, g.n))
    for u, v, w in g.edges:
        L[u, v] -= w
        L[v, u] -= w
        L[u, u] += w
        L[v, v] += w
    return L


def pseudo_inverse(L: np.ndarray) -> np.ndarray:
    """Moore-Penrose inverse of a connected graph Laplacian.

    Uses ``(L + J/n)^-1 - J/n``; the shifted matrix is factorized by
    Cholesky and a pivot below ``1e-10 * ||L||`` signals a second null
    direction, i.e. a disconnected graph.
    """
    L = np.asarray(L, dtype=float)
    n = L.shape[0]
    shift = np.full((n, n), 1.0 / n)
    M = L + shift
    tol = 1e-10 * max(np.linalg.norm(L, 2) if n > 1 else 0.0, 1.0)
    try:
        c, low = cho_factor(M)
    except LinAlgError as exc:
        raise DisconnectedGraph("Laplacian has rank deficiency greater than one") from exc
    if np.min(np.abs(np.diag(c))) ** 2 < tol:
        raise DisconnectedGraph("Laplacian has rank deficiency greater than one")
    inv = cho_solve((c, low), np.eye(n))
    out = inv - shift
    return (out + out.T) / 2.0


def commute_distance(g: Graph) -> MatrixOracle:
    """Commute-time distance between adjacent nodes, ``inf`` otherwise.

    Each connected component is handled on its own, with its own ``V_G``.
    """
    D = np.full((g.n, g.n), np.inf)
    np.fill_diagonal(D, 0.0)
    L = laplacian(g)
    for comp in g.components():
        if len(comp) < 2:
            continue
        idx = np.asarray(comp)
        Lc = L[np.ix_(idx, idx)]
        Lp = pseudo_inverse(Lc)
        vol = float(np.trace(Lc))
        pos = {u: k for k, u in enumerate(comp)}
        for u in comp:
            for v in g.adj[u]:
                if u < v:
                    i, j = pos[u], pos[v]
                    r = max(Lp[i, i] + Lp[j, j] - 2.0 * Lp[i, j], 0.0)
                    D[u, v] = D[v, u] = np.sqrt(vol * r)
    return MatrixOracle(D, kind="graph")


def absorb_small(g: Graph, p: Partition, d, min_size: int = 3) -> Partition:
    """Fold every node of a community smaller than ``min_size`` into its nearest big one.

    Node-to-community distance is the minimum over members. Eligible
    communities are fixed before any absorption; nodes are processed in
    ascending id; a node with no finite distance to any eligible community
    stays with what is left of its original community.
    """
    labels = np.array(p.labels)
    sizes = np.bincount(labels)
    eligible = sizes >= min_size
    small_nodes = np.nonzero(~eligible[labels])[0]
    if len(small_nodes) == 0 or not eligible.any():
        return Partition(labels)
    frozen = p.labels
    in_big = eligible[frozen]
    for u in small_nodes:
        row = np.asarray(d.row(int(u)), dtype=float)
        best = np.full(len(sizes), np.inf)
        np.minimum.at(best, frozen[in_big], row[in_big])
        target = int(np.argmin(best))
        if np.isfinite(best[target]):
            labels[u] = target
    return Partition(labels)


def detect_communities(g: Graph, cfg: RsConfig | None = None, *, return_dendrogram=False):
    """RS communities over commute-time distances, followed by :func:`absorb_small`."""
    cfg = replace(cfg or RsConfig(), mode="metric_only")
    oracle = commute_distance(g)
    dendro = cluster(oracle, cfg)
    part = absorb_small(g, dendro.partition(), oracle)
    return (part, dendro) if return_dendrogram else part


@dataclass
class CommunitySeries:
    initial: Partition
    merges: list[tuple[tuple[int, int], Partition]] = field(default_factory=list)

    def partitions(self) -> list[Partition]:
        return [self.initial] + [p for _, p in self.merges]


def _pick(scores: dict, keys, largest: bool):
    """Extreme score among ``keys``; near-equal scores tie and the smallest key wins."""
    keys = sorted(keys)
    vals = np.array([scores[k] for k in keys])
    target = vals.max() if largest else vals.min()
    close = np.abs(vals - target) <= _TIE_RTOL * max(1.0, abs(target))
    return keys[int(np.argmax(close))]


def resolution_scan(g: Graph, p: Partition, weighted=False) -> CommunitySeries:
    """Repeatedly merge the two communities bridged by the lowest-betweenness edge.

    Betweenness is taken on the full graph, which never changes during the
    scan, so it is computed once.
    """
    eb = betweenness_edge(g, weighted=weighted)
    labels = np.array(p.labels)
    series = CommunitySeries(Partition(labels))
    while True:
        inter = [e for e in eb if labels[e[0]] != labels[e[1]]]
        if not inter:
            break
        u, v = _pick(eb, inter, largest=False)
        labels[labels == labels[v]] = labels[u]
        part = Partition(labels)
        series.merges.append(((u, v), part))
        if part.k == 1:
            break
    return series


@dataclass
class GnTrace:
    removed: list[tuple[int, int]]
    partitions: list[Partition]
    # index into `removed` of the removal that produced each partition
    at_removal: list[int]


def girvan_newman_trace(g: Graph, weighted=False) -> GnTrace:
    """Remove max-betweenness edges until none remain, recording every split.

    After each removal only the component(s) that contained the edge are
    recomputed; betweenness elsewhere is unaffected.
    """
    work = g.copy()
    eb = betweenness_edge(work, weighted=weighted)
    n_comp = len(work.components())
    trace = GnTrace([], [], [])
    while eb:
        u, v = _pick(eb, eb.keys(), largest=True)
        work.remove_edge(u, v)
        trace.removed.append((u, v))
        comps = {tuple(work.component_of(u)), tuple(work.component_of(v))}
        stale = set()
        for comp in comps:
            stale.update(comp)
        eb = {e: s for e, s in eb.items() if e[0] not in stale and e != (u, v)}
        for comp in comps:
            eb.update(betweenness_edge(work, weighted=weighted, nodes=list(comp)))
        if len(comps) == 2:
            n_comp += 1
            labels = np.empty(work.n, dtype=np.intp)
            for k, c in enumerate(work.components()):
                labels[c] = k
            trace.partitions.append(Partition(labels))
            trace.at_removal.append(len(trace.removed) - 1)
    return trace


def girvan_newman(g: Graph, weighted=False) -> list[Partition]:
    """Successively finer connected-component partitions from edge removal."""
    return girvan_newman_trace(g, weighted=weighted).partitions
