"""Pairwise distance oracles and symmetric tie-breaking jitter.

An oracle answers ``d(i, j)`` for entities ``0 .. size-1``. Three backings
exist: coordinates (Euclidean), a dense precomputed matrix, and graphs
(a dense matrix in which ``inf`` marks non-adjacent pairs).

Every oracle exposes row blocks (:meth:`DistanceOracle.block`) so callers can
work vectorized, and :meth:`DistanceOracle.nearest` for the nearest-neighbor
scan the clustering loop is built on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .errors import (
    AsymmetricMatrix,
    NegativeDistance,
    NonFiniteDistance,
    NonzeroDiagonal,
    NotSquare,
)

__all__ = [
    "PointSet",
    "JitterConfig",
    "DistanceOracle",
    "CoordinateOracle",
    "MatrixOracle",
    "JitteredOracle",
    "euclidean_oracle",
    "matrix_oracle",
    "graph_oracle",
    "jitter",
    "pair_uniform",
]

_BLOCK_BYTES = 32 * 2**20
_U64_MASK = (1 << 64) - 1


@dataclass(frozen=True, eq=False)
class PointSet:
    """Coordinate vectors with optional ground-truth labels."""

    points: np.ndarray
    labels: np.ndarray | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[1] < 1:
            raise ValueError("points must be a 2-D array of shape (n, dim)")
        if not np.all(np.isfinite(pts)):
            raise ValueError("all coordinates must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.labels is not None:
            labels = np.asarray(self.labels)
            if labels.shape != (len(pts),):
                raise ValueError("labels must have one entry per point")
            object.__setattr__(self, "labels", labels)

    def __len__(self):
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def n(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class JitterConfig:
    seed: int = 0
    relative_scale: float = 1e-9

    def __post_init__(self):
        if not 0 <= int(self.seed) <= _U64_MASK:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not 0 < self.relative_scale < 1e-3:
            raise ValueError("relative_scale must lie in (0, 1e-3)")

    def derive(self, salt: int) -> "JitterConfig":
        """Return a config with an independent seed stream for ``salt``."""
        mixed = _splitmix_scalar(int(self.seed) ^ _splitmix_scalar(int(salt) + 1))
        return JitterConfig(seed=mixed, relative_scale=self.relative_scale)


# -- keyed generator ---------------------------------------------------------

def _splitmix(z):
    z = z + np.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def _splitmix_scalar(x: int) -> int:
    with np.errstate(over="ignore"):
        return int(_splitmix(np.array([x & _U64_MASK], dtype=np.uint64))[0])


def pair_uniform(seed: int, i, j) -> np.ndarray:
    """Deterministic uniforms in (0, 1) keyed by ``(seed, min(i,j), max(i,j))``.

    Counter-based: nothing is stored, and the value for a pair does not
    depend on the order of the arguments or on which other pairs are queried.
    """
    i = np.asarray(i, dtype=np.uint64)
    j = np.asarray(j, dtype=np.uint64)
    lo = np.minimum(i, j)
    hi = np.maximum(i, j)
    with np.errstate(over="ignore"):
        key = _splitmix(np.uint64(_splitmix_scalar(seed)) ^ ((lo << np.uint64(32)) | hi))
        h = _splitmix(key ^ np.uint64(0xD1B54A32D192ED03))
    return ((h >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


# -- oracles -----------------------------------------------------------------

class DistanceOracle:
    """Read-only pairwise distances over entities ``0 .. size-1``."""

    kind: str = "matrix"
    size: int = 0

    def block(self, rows, cols=None) -> np.ndarray:
        """Distances from each entity in ``rows`` to each entity in ``cols``."""
        raise NotImplementedError

    def __call__(self, i: int, j: int) -> float:
        return float(self.block([i], [j])[0, 0])

    def __len__(self):
        return self.size

    def row(self, i: int) -> np.ndarray:
        return self.block([i])[0]

    def to_matrix(self) -> np.ndarray:
        return self.block(np.arange(self.size))

    def row_blocks(self, among=None):
        """Yield ``(row_positions, block)`` pairs covering ``among`` x ``among``."""
        idx = np.arange(self.size) if among is None else np.asarray(among, dtype=np.intp)
        m = len(idx)
        step = max(1, min(m, _BLOCK_BYTES // (8 * max(m, 1))))
        for start in range(0, m, step):
            pos = np.arange(start, min(start + step, m))
            yield pos, self.block(idx[pos], idx)

    def nearest(self, among=None) -> np.ndarray:
        """Nearest neighbor of every entity, as positions into ``among``.

        Entities whose distances are all infinite get ``-1``. Ties resolve to
        the lowest position.
        """
        m = self.size if among is None else len(among)
        out = np.full(m, -1, dtype=np.intp)
        for pos, blk in self.row_blocks(among):
            blk = np.array(blk, dtype=float)
            blk[np.arange(len(pos)), pos] = np.inf
            best = blk.argmin(axis=1)
            finite = np.isfinite(blk[np.arange(len(pos)), best])
            out[pos[finite]] = best[finite]
        return out

    def mean_finite_distance(self) -> float:
        """Mean over finite off-diagonal entries (0.0 when there are none)."""
        total, count = 0.0, 0
        for pos, blk in self.row_blocks():
            blk = np.array(blk, dtype=float)
            blk[np.arange(len(pos)), pos] = np.inf
            fin = np.isfinite(blk)
            total += float(blk[fin].sum())
            count += int(fin.sum())
        return total / count if count else 0.0


class CoordinateOracle(DistanceOracle):
    kind = "coordinate"

    def __init__(self, points):
        self.points = np.asarray(points, dtype=float)
        self.size = self.points.shape[0]

    def block(self, rows, cols=None):
        rows = np.atleast_1d(np.asarray(rows, dtype=np.intp))
        xc = self.points if cols is None else self.points[np.atleast_1d(np.asarray(cols, dtype=np.intp))]
        # cdist sums squared coordinate differences, so d(i,j) == d(j,i) bitwise
        return cdist(self.points[rows], xc)


class MatrixOracle(DistanceOracle):
    def __init__(self, matrix, kind="matrix"):
        m = np.asarray(matrix, dtype=float).view()
        m.setflags(write=False)
        self.matrix = m
        self.size = m.shape[0]
        self.kind = kind

    def block(self, rows, cols=None):
        rows = np.atleast_1d(np.asarray(rows, dtype=np.intp))
        sub = self.matrix[rows]
        if cols is not None:
            sub = sub[:, np.atleast_1d(np.asarray(cols, dtype=np.intp))]
        return sub

    def to_matrix(self):
        return self.matrix


class JitteredOracle(DistanceOracle):
    """``d'(x,y) = d(x,y) * (1 + u_xy * relative_scale)``.

    Zero off-diagonal entries become ``eps_abs * u_xy`` with
    ``eps_abs = relative_scale * mean finite distance``; infinite entries and
    the diagonal pass through untouched.
    """

    def __init__(self, base: DistanceOracle, cfg: JitterConfig):
        self.base = base
        self.cfg = cfg
        self.size = base.size
        self.kind = base.kind
        self._eps_abs = None

    @property
    def eps_abs(self) -> float:
        if self._eps_abs is None:
            mean = self.base.mean_finite_distance()
            self._eps_abs = self.cfg.relative_scale * (mean if mean > 0 else 1.0)
        return self._eps_abs

    def _perturb(self, d, ri, ci):
        """Jittered value of base distances ``d`` for pairs ``(ri, ci)`` (same shape)."""
        u = pair_uniform(self.cfg.seed, ri, ci)
        out = d * (1.0 + u * self.cfg.relative_scale)
        zero = (d == 0) & (ri != ci)
        if zero.any():
            out = np.where(zero, self.eps_abs * u, out)
        return np.where(ri == ci, 0.0, out)

    def block(self, rows, cols=None):
        rows = np.atleast_1d(np.asarray(rows, dtype=np.intp))
        cols = np.arange(self.size) if cols is None else np.atleast_1d(np.asarray(cols, dtype=np.intp))
        d = np.asarray(self.base.block(rows, cols), dtype=float)
        ri, ci = np.broadcast_arrays(rows[:, None], cols[None, :])
        return self._perturb(d, ri, ci)

    def nearest(self, among=None):
        # Only entries whose jitter interval can undercut the best upper bound
        # need hashing; this is exact with respect to block().
        idx = np.arange(self.size) if among is None else np.asarray(among, dtype=np.intp)
        out = np.full(len(idx), -1, dtype=np.intp)
        s = self.cfg.relative_scale
        for pos, blk in self.base.row_blocks(among):
            d = np.array(blk, dtype=float, copy=None)
            if not d.flags.writeable:
                d = d.copy()
            nr = len(pos)
            ar = np.arange(nr)
            d[ar, pos] = np.inf
            best = d.argmin(axis=1)
            m1 = d[ar, best]
            saved = m1.copy()
            d[ar, best] = np.inf
            m2 = d.min(axis=1)
            d[ar, best] = saved
            # unique winner: positive minimum and runner-up outside its jitter window
            easy = (m1 > 0) & (m2 > m1 * (1.0 + s))
            out[pos[easy]] = best[easy]
            hard = np.nonzero(~easy & np.isfinite(m1))[0]
            for r in hard:
                out[pos[r]] = self._nearest_in_row(d[r], idx[pos[r]], idx)
        return out

    def _nearest_in_row(self, d, i, cols):
        zero = d == 0
        upper = d * (1.0 + self.cfg.relative_scale)
        if zero.any():
            upper[zero] = self.eps_abs
        cand = np.nonzero(d <= upper.min())[0]
        vals = self._perturb(d[cand], np.full(len(cand), i), cols[cand])
        return int(cand[np.lexsort((cand, vals))[0]])


# -- constructors ------------------------------------------------------------

def euclidean_oracle(ps) -> CoordinateOracle:
    """Euclidean distances over a :class:`PointSet` (or a raw ``(n, dim)`` array)."""
    pts = ps.points if isinstance(ps, PointSet) else PointSet(ps).points
    if len(pts) == 0:
        raise ValueError("point set is empty")
    return CoordinateOracle(pts)


def _check_square(m):
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquare(f"distance matrix must be square, got shape {m.shape}")


def matrix_oracle(m) -> MatrixOracle:
    """Validate and wrap a precomputed square distance matrix."""
    m = np.array(m, dtype=float)
    _check_square(m)
    if np.isnan(m).any() or np.isinf(m).any():
        raise NonFiniteDistance("distance matrix entries must be finite")
    if (m < 0).any():
        raise NegativeDistance("distance matrix has negative entries")
    if np.any(np.diag(m) != 0):
        raise NonzeroDiagonal("distance matrix diagonal must be zero")
    tol = 1e-12 * np.maximum(np.abs(m), 1.0)
    if np.any(np.abs(m - m.T) > tol):
        raise AsymmetricMatrix("distance matrix is not symmetric")
    # mirror the upper triangle so symmetry is bit-exact
    m = np.triu(m) + np.triu(m, 1).T
    return MatrixOracle(m, kind="matrix")


def graph_oracle(m) -> MatrixOracle:
    """Wrap a graph distance matrix; ``inf`` marks non-adjacent pairs."""
    m = np.array(m, dtype=float)
    _check_square(m)
    if np.isnan(m).any() or (m < 0).any():
        raise NegativeDistance("graph distances must be nonnegative")
    if np.any(np.diag(m) != 0):
        raise NonzeroDiagonal("graph distance diagonal must be zero")
    if not np.array_equal(m, m.T):
        raise AsymmetricMatrix("graph distance matrix is not symmetric")
    return MatrixOracle(m, kind="graph")


def jitter(oracle: DistanceOracle, cfg: JitterConfig | None = None) -> JitteredOracle:
    return JitteredOracle(oracle, cfg or JitterConfig())
