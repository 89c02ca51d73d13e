"""File ingestion and tabular output."""

from __future__ import annotations

import csv
import logging
from pathlib import Path

import numpy as np

from .distance import MatrixOracle, PointSet, matrix_oracle
from .errors import (
    EmptyFile,
    MalformedLine,
    NonNumericField,
    NonPositiveWeight,
    NotSquare,
    RaggedRows,
    SelfLoop,
)
from .graph import Graph
from .hierarchy import Partition

__all__ = [
    "load_points",
    "load_graph",
    "load_distance_matrix",
    "write_partition",
    "read_partition",
    "write_rows",
]

log = logging.getLogger(__name__)


def _read_csv_rows(path):
    with open(path, newline="") as fh:
        rows = [[c.strip() for c in r] for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise EmptyFile(f"{path} contains no data")
    return rows


def _is_number(s):
    try:
        float(s)
    except ValueError:
        return False
    return True


def _label_index(label_col, width):
    if label_col is None:
        return None
    if label_col == "last":
        return width - 1
    if label_col == "first":
        return 0
    idx = int(label_col)
    return idx + width if idx < 0 else idx


def load_points(path, label_col=None, header=None) -> PointSet:
    """Read comma-separated numeric rows, optionally with a label column.

    ``label_col`` is ``None``, ``"last"``, ``"first"`` or a column index.
    ``header=None`` treats the first row as a header when none of its
    coordinate fields parse as numbers.
    """
    rows = _read_csv_rows(path)
    width = len(rows[0])
    li = _label_index(label_col, width)
    coord_cols = [c for c in range(width) if c != li]
    if header is None:
        header = not any(_is_number(rows[0][c]) for c in coord_cols if c < len(rows[0]))
    start = 1 if header else 0
    body = rows[start:]
    if not body:
        raise EmptyFile(f"{path} has a header but no data rows")
    pts = np.empty((len(body), len(coord_cols)))
    labels = []
    for r, row in enumerate(body, start=start + 1):
        if len(row) != width:
            raise RaggedRows(f"row {r} has {len(row)} fields, expected {width}")
        for k, c in enumerate(coord_cols):
            try:
                pts[r - start - 1, k] = float(row[c])
            except ValueError:
                raise NonNumericField(r, c + 1, row[c]) from None
        if li is not None:
            labels.append(row[li])
    return PointSet(pts, np.asarray(labels) if li is not None else None)


def load_graph(path, weighted=True) -> Graph:
    """Read an edge list of ``u v [w]`` lines; ``#`` starts a comment.

    Node names are mapped to dense indices in order of first appearance.
    Duplicate edges keep their first weight; the number dropped is logged
    and stored on the graph as ``duplicates``.
    """
    names: dict[str, int] = {}
    edges: dict[tuple[int, int], float] = {}
    dup = 0
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise MalformedLine(f"line {lineno}: expected 'u v [w]', got {raw.strip()!r}")
            u, v = parts[0], parts[1]
            w = 1.0
            if len(parts) == 3:
                try:
                    w = float(parts[2])
                except ValueError:
                    raise MalformedLine(f"line {lineno}: weight {parts[2]!r} is not a number") from None
                if not w > 0:
                    raise NonPositiveWeight(f"line {lineno}: weight {w} must be positive")
                if not weighted:
                    w = 1.0
            if u == v:
                raise SelfLoop(f"line {lineno}: self-loop on {u!r}")
            iu = names.setdefault(u, len(names))
            iv = names.setdefault(v, len(names))
            key = (min(iu, iv), max(iu, iv))
            if key in edges:
                dup += 1
                continue
            edges[key] = w
    if dup:
        log.warning("%s: collapsed %d duplicate edges", path, dup)
    g = Graph(len(names), [(u, v, w) for (u, v), w in edges.items()], names=list(names))
    g.duplicates = dup
    return g


def load_distance_matrix(path) -> MatrixOracle:
    rows = _read_csv_rows(path)
    n = len(rows)
    m = np.empty((n, n))
    for r, row in enumerate(rows, start=1):
        if len(row) != n:
            raise NotSquare(f"row {r} has {len(row)} fields for a {n}-row matrix")
        for c, val in enumerate(row, start=1):
            try:
                m[r - 1, c - 1] = float(val)
            except ValueError:
                raise NonNumericField(r, c, val) from None
    return matrix_oracle(m)


def write_partition(path, p: Partition, ids=None):
    """Two-column CSV ``entity_id,cluster_label`` with a header."""
    ids = list(range(len(p))) if ids is None else list(ids)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["entity_id", "cluster_label"])
        for i, c in zip(ids, p.labels.tolist()):
            w.writerow([i, c])


def read_partition(path) -> dict[str, str]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        head = next(reader, None)
        if head is None:
            raise EmptyFile(f"{path} is empty")
        if [h.strip() for h in head[:2]] != ["entity_id", "cluster_label"]:
            raise MalformedLine(f"{path}: header must be 'entity_id,cluster_label'")
        out = {}
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise MalformedLine(f"{path}: line {lineno} must have two fields")
            out[row[0].strip()] = row[1].strip()
    return out


def write_rows(path, header, rows):
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
