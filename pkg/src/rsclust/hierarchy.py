"""The iterative RS clustering loop and its dendrogram.

Each pass builds SCTs over the current entities, prunes them, and replaces
every SCT by an artificial root. Roots sit either at their single member or
at the midpoint of the two supporting nodes; the next pass clusters roots.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .distance import CoordinateOracle, DistanceOracle, JitterConfig, MatrixOracle, jitter
from .errors import InfiniteBaseDistance, IterationOutOfRange
from .sct import Sct, construct_scts, prune

__all__ = [
    "AtEntity",
    "Midpoint",
    "Root",
    "Partition",
    "Dendrogram",
    "RsConfig",
    "IterationTrace",
    "root_distance_coordinate",
    "root_distance_metric",
    "root_distance_table",
    "cluster",
    "partition_at_iteration",
]


@dataclass(frozen=True)
class AtEntity:
    entity: int


@dataclass(frozen=True)
class Midpoint:
    a: int
    b: int


@dataclass(frozen=True)
class Root:
    """An artificial root. Placement and children refer to dendrogram node ids."""

    id: int
    placement: AtEntity | Midpoint
    iteration: int
    children: tuple[int, ...]


class Partition:
    """Cluster labels ``0 .. k-1`` assigned in order of first appearance."""

    def __init__(self, labels):
        raw = np.asarray(labels)
        if raw.ndim != 1:
            raise ValueError("labels must be one-dimensional")
        _, first, inv = np.unique(raw, return_index=True, return_inverse=True)
        # relabel by first appearance so equal partitions compare equal
        order = np.argsort(np.argsort(first))
        self.labels = order[inv.ravel()].astype(np.intp)
        self.labels.setflags(write=False)

    @classmethod
    def from_clusters(cls, clusters, n=None):
        clusters = [list(c) for c in clusters]
        n = n if n is not None else sum(len(c) for c in clusters)
        labels = np.full(n, -1, dtype=np.intp)
        for k, c in enumerate(clusters):
            labels[c] = k
        if (labels < 0).any():
            raise ValueError("clusters do not cover every entity")
        return cls(labels)

    def __len__(self):
        return len(self.labels)

    @property
    def k(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    def clusters(self) -> list[list[int]]:
        out = [[] for _ in range(self.k)]
        for i, c in enumerate(self.labels.tolist()):
            out[c].append(i)
        return out

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k)

    def is_coarsening_of(self, finer: "Partition") -> bool:
        """Every cluster of ``finer`` lies inside a single cluster of ``self``."""
        if len(finer) != len(self):
            return False
        pairs = np.unique(np.stack([finer.labels, self.labels]), axis=1)
        return len(np.unique(pairs[0])) == pairs.shape[1]

    def __eq__(self, other):
        return isinstance(other, Partition) and np.array_equal(self.labels, other.labels)

    def __hash__(self):
        return hash(self.labels.tobytes())

    def __repr__(self):
        return f"Partition(n={len(self)}, k={self.k})"


@dataclass(frozen=True)
class RsConfig:
    alpha: float = 1.5
    seed: int = 0
    jitter: JitterConfig = field(default_factory=JitterConfig)
    mode: str = "coordinate"
    max_iterations: int | None = None

    def __post_init__(self):
        if not self.alpha > 1:
            raise ValueError("alpha must exceed 1")
        if self.mode not in ("coordinate", "metric_only"):
            raise ValueError("mode must be 'coordinate' or 'metric_only'")


@dataclass
class IterationTrace:
    """Per-pass record kept when ``cluster(..., keep_trace=True)``.

    SCT member ids are positions among ``node_ids`` (the entities of that
    pass); ``oracle`` is the jittered oracle the pass ran on.
    """

    iteration: int
    node_ids: list[int]
    oracle: DistanceOracle
    built: list[Sct]
    kept: list[Sct]
    singletons: list[Sct]


@dataclass
class Dendrogram:
    n_leaves: int
    roots: list[Root] = field(default_factory=list)
    parent: dict[int, int] = field(default_factory=dict)
    iterations: int = 0
    trace: list[IterationTrace] | None = field(default=None, repr=False, compare=False)

    @property
    def leaves(self) -> list[int]:
        return list(range(self.n_leaves))

    def root(self, node_id: int) -> Root:
        return self.roots[node_id - self.n_leaves]

    def edges(self) -> list[tuple[int, int]]:
        return sorted(self.parent.items())

    def top_level(self, t: int | None = None) -> list[int]:
        """Node ids that have no parent as of the end of pass ``t``."""
        t = self.iterations if t is None else t
        if t == 0:
            return self.leaves
        return [r.id for r in self.roots if r.iteration <= t and (
            r.id not in self.parent or self.root(self.parent[r.id]).iteration > t)]

    def partition(self, t: int | None = None) -> Partition:
        return partition_at_iteration(self, self.iterations if t is None else t)

    def locations(self, points) -> dict[int, np.ndarray]:
        """Resolve every node to a coordinate: leaves to their point, roots recursively."""
        pts = np.asarray(points, dtype=float)
        loc = {i: pts[i] for i in range(self.n_leaves)}
        for r in self.roots:
            p = r.placement
            loc[r.id] = loc[p.entity] if isinstance(p, AtEntity) else (loc[p.a] + loc[p.b]) / 2.0
        return loc

    # -- serialization --------------------------------------------------------
    def to_dict(self) -> dict:
        def place(p):
            if isinstance(p, AtEntity):
                return {"type": "entity", "of": [p.entity]}
            return {"type": "midpoint", "of": [p.a, p.b]}

        return {
            "leaves": self.leaves,
            "iterations": self.iterations,
            "roots": [
                {"id": r.id, "iteration": r.iteration, "placement": place(r.placement),
                 "children": list(r.children)}
                for r in self.roots
            ],
            "edges": [{"child": c, "parent": p} for c, p in self.edges()],
        }

    @classmethod
    def from_dict(cls, doc: Mapping) -> "Dendrogram":
        parent = {int(e["child"]): int(e["parent"]) for e in doc["edges"]}
        roots = []
        for r in doc["roots"]:
            pl = r["placement"]
            of = [int(x) for x in pl["of"]]
            placement = AtEntity(of[0]) if pl["type"] == "entity" else Midpoint(of[0], of[1])
            children = r.get("children")
            if children is None:
                children = [c for c, p in parent.items() if p == int(r["id"])]
            roots.append(Root(int(r["id"]), placement, int(r["iteration"]), tuple(sorted(int(c) for c in children))))
        iterations = doc.get("iterations", max((r.iteration for r in roots), default=0))
        return cls(len(doc["leaves"]), roots, parent, int(iterations))

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text: str) -> "Dendrogram":
        return cls.from_dict(json.loads(text))

    def to_newick(self, names=None) -> str:
        kids: dict[int, list[int]] = {}
        for c, p in self.parent.items():
            kids.setdefault(p, []).append(c)

        def label(i):
            return str(names[i]) if names is not None else str(i)

        def render(node):
            if node < self.n_leaves:
                return label(node)
            inner = ",".join(render(c) for c in sorted(kids.get(node, [])))
            return f"({inner})r{node}"

        tops = self.top_level()
        body = render(tops[0]) if len(tops) == 1 else "(" + ",".join(render(t) for t in tops) + ")"
        return body + ";"


# -- root distances ------------------------------------------------------------

def root_distance_coordinate(r1: Root, r2: Root, locations) -> float:
    """Euclidean distance between resolved root locations.

    ``locations`` maps dendrogram node ids to coordinate vectors (see
    :meth:`Dendrogram.locations`).
    """

    def where(r):
        p = r.placement
        if isinstance(p, AtEntity):
            return np.asarray(locations[p.entity], dtype=float)
        return (np.asarray(locations[p.a], dtype=float) + np.asarray(locations[p.b], dtype=float)) / 2.0

    return float(np.linalg.norm(where(r1) - where(r2)))


def root_distance_metric(r1: Root, r2: Root, d: Callable[[int, int], float]) -> float:
    """Root distance from pairwise base distances alone.

    Point/point returns ``|ac|``; midpoint/point uses the median-length
    identity; midpoint/midpoint the four-point midpoint identity. A negative
    radicand (non-Euclidean input) is clamped to zero.
    """
    p1, p2 = r1.placement, r2.placement
    if isinstance(p1, AtEntity) and isinstance(p2, Midpoint):
        p1, p2 = p2, p1

    def dist(x, y):
        v = 0.0 if x == y else float(d(x, y))
        if np.isinf(v):
            raise InfiniteBaseDistance(f"base distance between {x} and {y} is infinite")
        return v

    if isinstance(p1, AtEntity):
        return dist(p1.entity, p2.entity)
    a, b = p1.a, p1.b
    if isinstance(p2, AtEntity):
        c = p2.entity
        rad = (dist(a, c) ** 2 + dist(b, c) ** 2) / 2.0 - dist(a, b) ** 2 / 4.0
        return float(np.sqrt(max(rad, 0.0)))
    c, e = p2.a, p2.b
    rad = (dist(a, c) ** 2 + dist(a, e) ** 2 + dist(b, c) ** 2 + dist(b, e) ** 2
           - dist(a, b) ** 2 - dist(c, e) ** 2)
    return 0.5 * float(np.sqrt(max(rad, 0.0)))


def root_distance_table(D: np.ndarray, first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """All pairwise root distances at once.

    Root ``r`` is the midpoint of level entities ``first[r]`` and
    ``second[r]`` (equal for point roots, where the midpoint identity
    reduces to the other two cases). ``inf`` propagates.
    """
    A = np.asarray(first, dtype=np.intp)
    B = np.asarray(second, dtype=np.intp)
    D2 = np.square(D)
    ab = D2[A, B]
    with np.errstate(invalid="ignore"):
        rad = (D2[np.ix_(A, A)] + D2[np.ix_(A, B)] + D2[np.ix_(B, A)] + D2[np.ix_(B, B)]
               - ab[:, None] - ab[None, :])
    out = 0.5 * np.sqrt(np.maximum(rad, 0.0))
    out = np.triu(out, 1)
    out = out + out.T
    np.fill_diagonal(out, 0.0)
    return out


# -- main loop -------------------------------------------------------------------

def cluster(oracle: DistanceOracle, cfg: RsConfig | None = None, *, keep_trace: bool = False) -> Dendrogram:
    """Run RS over all entities of ``oracle``.

    Coordinate mode needs a coordinate-backed oracle and moves roots to
    explicit midpoints; metric-only mode recomputes root distances from the
    previous level's pairwise distances. Stops at a single root, on a pass
    that does not reduce the entity count, at ``max_iterations``, or when
    every remaining distance is infinite.
    """
    cfg = cfg or RsConfig()
    n = oracle.size
    if n == 0:
        raise ValueError("oracle has no entities")
    if cfg.mode == "coordinate" and not isinstance(oracle, CoordinateOracle):
        raise ValueError("coordinate mode needs a coordinate-backed oracle; use mode='metric_only'")
    dendro = Dendrogram(n)
    if keep_trace:
        dendro.trace = []
    base: DistanceOracle = oracle
    level = list(range(n))
    next_id = n
    t = 0
    while len(level) > 1 and (cfg.max_iterations is None or t < cfg.max_iterations):
        jit = jitter(base, cfg.jitter.derive(t))
        nearest = jit.nearest().tolist()
        if all(x < 0 for x in nearest):
            break
        rng = np.random.default_rng([cfg.seed, t])
        built = construct_scts(range(len(level)), jit, rng, isolated="singleton", nearest=nearest)
        kept, singles = [], []
        for s in built:
            if s.is_special:
                singles.append(s)
            else:
                trimmed, cut = prune(s, cfg.alpha)
                kept.append(trimmed)
                singles.extend(cut)
        groups = sorted(kept + singles, key=lambda s: min(s.members))
        if len(groups) >= len(level):
            break
        t += 1
        if keep_trace:
            dendro.trace.append(IterationTrace(t, list(level), jit, built, kept, singles))
        first = np.empty(len(groups), dtype=np.intp)
        second = np.empty(len(groups), dtype=np.intp)
        new_level = []
        for g, s in enumerate(groups):
            if s.is_special:
                first[g] = second[g] = s.members[0]
                placement = AtEntity(level[s.members[0]])
            else:
                first[g], second[g] = s.supporting_pair
                placement = Midpoint(level[first[g]], level[second[g]])
            children = tuple(sorted(level[x] for x in s.members))
            dendro.roots.append(Root(next_id, placement, t, children))
            for c in children:
                dendro.parent[c] = next_id
            new_level.append(next_id)
            next_id += 1
        if cfg.mode == "coordinate":
            pts = base.points
            base = CoordinateOracle((pts[first] + pts[second]) / 2.0)
        else:
            table = root_distance_table(np.asarray(base.to_matrix(), dtype=float), first, second)
            base = MatrixOracle(table, kind=oracle.kind)
        level = new_level
    dendro.iterations = t
    return dendro


def partition_at_iteration(d: Dendrogram, t: int) -> Partition:
    """Clusters formed by the roots that are top-level at the end of pass ``t``."""
    if not 0 <= t <= d.iterations:
        raise IterationOutOfRange(f"iteration {t} outside 0..{d.iterations}")
    total = d.n_leaves + len(d.roots)
    up = np.arange(total)
    for c, p in d.parent.items():
        up[c] = p
    it = np.zeros(total, dtype=np.intp)
    for r in d.roots:
        it[r.id] = r.iteration
    labels = np.arange(d.n_leaves)
    for _ in range(t):
        nxt = up[labels]
        labels = np.where(it[nxt] <= t, nxt, labels)
    return Partition(labels)
