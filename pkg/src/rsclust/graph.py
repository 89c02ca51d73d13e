"""Undirected simple graphs with optional edge weights."""

from __future__ import annotations

from collections import deque

from .errors import NonPositiveWeight, SelfLoop

__all__ = ["Graph"]


class Graph:
    """Undirected graph on nodes ``0 .. n-1``.

    Edges are stored once as ``(u, v, w)`` with ``u < v``; ``names`` keeps the
    original node identifiers when the graph came from a file.
    """

    def __init__(self, n, edges=(), names=None):
        self.n = int(n)
        self.names = list(names) if names is not None else list(range(self.n))
        if len(self.names) != self.n:
            raise ValueError("names must have one entry per node")
        self.adj: list[dict[int, float]] = [dict() for _ in range(self.n)]
        self._edges: dict[tuple[int, int], float] = {}
        for e in edges:
            u, v = e[0], e[1]
            w = e[2] if len(e) > 2 else 1.0
            self.add_edge(u, v, w)

    def add_edge(self, u, v, w=1.0):
        u, v, w = int(u), int(v), float(w)
        if u == v:
            raise SelfLoop(f"self-loop on node {u}")
        if not w > 0:
            raise NonPositiveWeight(f"edge ({u}, {v}) has weight {w}")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise IndexError(f"edge ({u}, {v}) out of range for {self.n} nodes")
        key = (min(u, v), max(u, v))
        if key in self._edges:
            raise ValueError(f"duplicate edge {key}")
        self._edges[key] = w
        self.adj[u][v] = w
        self.adj[v][u] = w

    def remove_edge(self, u, v):
        key = (min(u, v), max(u, v))
        del self._edges[key]
        del self.adj[u][v]
        del self.adj[v][u]

    def has_edge(self, u, v) -> bool:
        return (min(u, v), max(u, v)) in self._edges

    def weight(self, u, v) -> float:
        return self._edges[(min(u, v), max(u, v))]

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return [(u, v, w) for (u, v), w in sorted(self._edges.items())]

    def edge_keys(self) -> list[tuple[int, int]]:
        return sorted(self._edges)

    @property
    def m(self) -> int:
        return len(self._edges)

    def copy(self) -> "Graph":
        return Graph(self.n, self.edges, self.names)

    def component_of(self, s) -> list[int]:
        seen = {s}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in self.adj[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return sorted(seen)

    def components(self) -> list[list[int]]:
        out, seen = [], set()
        for s in range(self.n):
            if s not in seen:
                comp = self.component_of(s)
                seen.update(comp)
                out.append(comp)
        return out

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"
