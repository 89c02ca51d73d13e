"""Group-average (average-linkage) agglomerative clustering."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distance import DistanceOracle
from .errors import BadK, InfiniteDistance
from .hierarchy import Partition

__all__ = ["Merge", "average_linkage", "group_average", "partition_from_merges", "to_linkage_matrix"]


@dataclass(frozen=True)
class Merge:
    """One agglomeration step; clusters are named by their smallest member."""

    left: int
    right: int
    distance: float
    step: int


def average_linkage(oracle: DistanceOracle, stop_at: int = 1) -> list[Merge]:
    """Merge clusters with the smallest mean cross distance until ``stop_at`` remain.

    Linkage rows are updated with the Lance-Williams rule. Every active row
    caches its nearest cluster, which keeps each step's pick an exact global
    minimum (ties go to the lexicographically smallest pair of names) at
    O(n) work per step instead of a full table scan.
    """
    D = np.array(oracle.to_matrix(), dtype=float)
    n = D.shape[0]
    if not np.isfinite(D).all():
        raise InfiniteDistance("group average needs finite distances")
    np.fill_diagonal(D, np.inf)
    size = np.ones(n)
    active = np.ones(n, dtype=bool)
    nn = D.argmin(axis=1) if n > 1 else np.zeros(n, dtype=np.intp)
    nnd = D[np.arange(n), nn]
    merges: list[Merge] = []
    for step in range(n - stop_at):
        a = int(np.argmin(nnd))
        b = int(nn[a])
        dist = float(nnd[a])
        # a is the smallest row attaining the minimum, so a < b
        merges.append(Merge(a, b, dist, step))
        sa, sb = size[a], size[b]
        new = (sa * D[a] + sb * D[b]) / (sa + sb)
        new[a] = np.inf
        new[b] = np.inf
        D[a] = new
        D[:, a] = new
        D[b] = np.inf
        D[:, b] = np.inf
        size[a] = sa + sb
        active[b] = False
        nnd[b] = np.inf
        # rows that pointed at a or b must rescan; others only compare against a
        stale = np.nonzero(active & ((nn == a) | (nn == b)))[0]
        closer = active & ((new < nnd) | ((new == nnd) & (a < nn)))
        closer[stale] = False
        nn[closer] = a
        nnd[closer] = new[closer]
        if len(stale):
            rows = D[stale]
            nn[stale] = rows.argmin(axis=1)
            nnd[stale] = rows[np.arange(len(stale)), nn[stale]]
    return merges


def partition_from_merges(n: int, merges, k: int) -> Partition:
    """Labels after applying the first ``n - k`` merges."""
    if not 1 <= k <= n:
        raise BadK(f"k must lie in [1, {n}], got {k}")
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for m in merges[: n - k]:
        parent[find(m.right)] = find(m.left)
    return Partition([find(i) for i in range(n)])


def group_average(oracle: DistanceOracle, k: int) -> Partition:
    n = oracle.size
    if not 1 <= k <= n:
        raise BadK(f"k must lie in [1, {n}], got {k}")
    return partition_from_merges(n, average_linkage(oracle, stop_at=k), k)


def to_linkage_matrix(n: int, merges) -> np.ndarray:
    """SciPy-style ``(n-1, 4)`` linkage matrix for a complete merge list."""
    cid = list(range(n))
    count = [1] * n
    Z = np.zeros((len(merges), 4))
    for i, m in enumerate(merges):
        x, y = cid[m.left], cid[m.right]
        size = count[m.left] + count[m.right]
        Z[i] = (min(x, y), max(x, y), m.distance, size)
        cid[m.left] = n + i
        count[m.left] = size
    return Z
