"""Sub-clustering trees (SCTs) built from nearest-neighbor chains.

Starting from a random candidate, a chain follows nearest neighbors until it
either closes on a reciprocal pair (a new SCT supported by that pair) or runs
into an entity already placed in some SCT (the chain hangs below it). Deep
nodes are then pruned into singleton SCTs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadAlpha, IsolatedEntity, NotAMember

__all__ = [
    "Sct",
    "ChainOutcome",
    "NEW_SCT",
    "ATTACH",
    "build_chain",
    "construct_scts",
    "depth",
    "depths",
    "prune_threshold",
    "prune",
]

NEW_SCT = "new_sct"
ATTACH = "attach"


@dataclass
class Sct:
    """One sub-clustering tree.

    ``parent`` maps every non-supporting member to its chain successor; the
    two supporting nodes have no entry. A special (singleton) SCT has one
    member and ``supporting_pair is None``.
    """

    members: list[int]
    parent: dict[int, int] = field(default_factory=dict)
    supporting_pair: tuple[int, int] | None = None

    @property
    def is_special(self) -> bool:
        return self.supporting_pair is None

    def __len__(self):
        return len(self.members)

    def edges(self) -> list[tuple[int, int]]:
        """Undirected tree edges, including the link between the supporting nodes."""
        out = list(self.parent.items())
        if self.supporting_pair is not None:
            out.append(self.supporting_pair)
        return out


@dataclass(frozen=True)
class ChainOutcome:
    variant: str
    chain: tuple[int, ...]
    attach_target: int | None = None


def _nearest_map(oracle, entities):
    idx = np.asarray(sorted(entities), dtype=np.intp)
    if len(idx) == oracle.size and np.array_equal(idx, np.arange(oracle.size)):
        return oracle.nearest().tolist()
    pos = oracle.nearest(idx)
    out = np.full(oracle.size, -1, dtype=np.intp)
    out[idx] = np.where(pos >= 0, idx[pos], -1)
    return out.tolist()


def build_chain(start, candidates, oracle=None, nearest=None) -> ChainOutcome:
    """Follow nearest neighbors from ``start``.

    ``nearest`` (a sequence mapping entity to its nearest neighbor, ``-1``
    when none) may be passed to avoid recomputing the scan; otherwise it is
    derived from ``oracle`` over all of its entities.
    """
    if nearest is None:
        nearest = _nearest_map(oracle, range(oracle.size))
    if start not in candidates:
        raise ValueError(f"start {start} is not a candidate")
    chain = [start]
    nxt = nearest[start]
    if nxt < 0:
        raise IsolatedEntity(start)
    limit = 2 * len(nearest) + 2
    while True:
        if len(chain) >= 2 and nxt == chain[-2]:
            return ChainOutcome(NEW_SCT, tuple(chain))
        if nxt not in candidates:
            return ChainOutcome(ATTACH, tuple(chain), nxt)
        chain.append(nxt)
        if len(chain) > limit:
            raise RuntimeError("nearest-neighbor chain failed to terminate")
        nxt = nearest[nxt]


class _Candidates:
    """Set with O(1) membership, removal and uniform draws."""

    def __init__(self, items):
        self.items = sorted(items)
        self.pos = {x: i for i, x in enumerate(self.items)}

    def __contains__(self, x):
        return x in self.pos

    def __len__(self):
        return len(self.items)

    def draw(self, rng) -> int:
        return self.items[int(rng.integers(len(self.items)))]

    def remove(self, x):
        i = self.pos.pop(x)
        last = self.items.pop()
        if i < len(self.items):
            self.items[i] = last
            self.pos[last] = i


def construct_scts(entities, oracle, rng_seed=0, *, isolated="raise", nearest=None) -> list[Sct]:
    """Partition ``entities`` into SCTs.

    Nearest neighbors range over all of ``entities`` (not just the remaining
    candidates). With ``isolated="singleton"`` an entity without any finite
    neighbor becomes a special SCT instead of raising :class:`IsolatedEntity`.
    """
    entities = list(entities)
    if not entities:
        raise ValueError("entities must be nonempty")
    if isolated not in ("raise", "singleton"):
        raise ValueError("isolated must be 'raise' or 'singleton'")
    if nearest is None:
        nearest = _nearest_map(oracle, entities)
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    cand = _Candidates(entities)
    scts: list[Sct] = []
    owner: dict[int, int] = {}
    while len(cand):
        start = cand.draw(rng)
        try:
            out = build_chain(start, cand, nearest=nearest)
        except IsolatedEntity:
            if isolated == "raise":
                raise
            owner[start] = len(scts)
            scts.append(Sct([start]))
            cand.remove(start)
            continue
        chain = out.chain
        if out.variant == NEW_SCT:
            sct = Sct(list(chain), {}, (chain[-2], chain[-1]))
            for a, b in zip(chain[:-2], chain[1:-1]):
                sct.parent[a] = b
            k = len(scts)
            scts.append(sct)
        else:
            k = owner[out.attach_target]
            sct = scts[k]
            sct.members.extend(chain)
            for a, b in zip(chain, chain[1:] + (out.attach_target,)):
                sct.parent[a] = b
        for x in chain:
            owner[x] = k
            cand.remove(x)
    return scts


def depths(sct: Sct) -> dict[int, int]:
    """Depth of every member: edges to the nearer supporting node, plus one."""
    if sct.supporting_pair is None:
        raise ValueError("depth is undefined for a special SCT")
    p, q = sct.supporting_pair
    out = {p: 1, q: 1}
    for x in sct.members:
        path = []
        while x not in out:
            path.append(x)
            x = sct.parent[x]
        h = out[x]
        for y in reversed(path):
            h += 1
            out[y] = h
    return out


def depth(node: int, sct: Sct) -> int:
    """Depth ``(l_p + l_q + 1) / 2`` of ``node``, with p and q directly linked."""
    if node not in sct.parent and (sct.supporting_pair is None or node not in sct.supporting_pair):
        raise NotAMember(node)
    if sct.supporting_pair is None:
        raise ValueError("depth is undefined for a special SCT")
    steps = 0
    while node in sct.parent:
        node = sct.parent[node]
        steps += 1
    # l to the reached support is `steps`, to its partner `steps + 1`
    return steps + 1


def prune_threshold(size: int, alpha: float) -> int:
    """Smallest integer ``k`` with ``alpha**k >= size + 1``."""
    if not alpha > 1:
        raise BadAlpha(f"alpha must exceed 1, got {alpha}")
    if size < 1:
        raise ValueError("size must be positive")
    target = size + 1
    k = max(1, math.ceil(math.log(target) / math.log(alpha)))
    while k > 1 and alpha ** (k - 1) >= target:
        k -= 1
    while alpha**k < target:
        k += 1
    return k


def prune(sct: Sct, alpha: float) -> tuple[Sct, list[Sct]]:
    """Remove every member deeper than the threshold for the pre-prune size."""
    phi = prune_threshold(len(sct.members), alpha)
    h = depths(sct)
    cut = [x for x in sct.members if h[x] > phi]
    if not cut:
        return sct, []
    gone = set(cut)
    kept = [x for x in sct.members if x not in gone]
    parent = {a: b for a, b in sct.parent.items() if a not in gone}
    return Sct(kept, parent, sct.supporting_pair), [Sct([x]) for x in cut]
