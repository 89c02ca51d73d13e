"""Batch command-line front end.

Subcommands: ``cluster``, ``communities``, ``evaluate``, ``bench`` and
``sweep-alpha``. Every command writes plot-ready CSV/JSON into ``--out-dir``;
failures exit nonzero with a JSON error record on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from .baselines import average_linkage
from .distance import JitterConfig, PointSet, euclidean_oracle
from .errors import MismatchedEntities, RsError
from .hierarchy import Partition, RsConfig, cluster
from .io import load_distance_matrix, load_graph, load_points, read_partition, write_partition, write_rows
from .metrics import rand_index, tpr
from .netcluster import detect_communities, girvan_newman, resolution_scan

log = logging.getLogger("rsclust")


def _config(args, alpha=None) -> RsConfig:
    mode = "metric_only" if getattr(args, "mode", "coordinate") == "metric" else "coordinate"
    return RsConfig(
        alpha=args.alpha if alpha is None else alpha,
        seed=args.seed,
        jitter=JitterConfig(seed=args.seed, relative_scale=args.jitter_scale),
        mode=mode,
        max_iterations=getattr(args, "max_iterations", None),
    )


def _label_col(value):
    if value in (None, "none"):
        return None
    if value in ("last", "first"):
        return value
    return int(value)


def _load_dataset(args):
    """Return (oracle, labels or None, mode override)."""
    if args.matrix:
        oracle = load_distance_matrix(args.input)
        labels = None
        if args.labels:
            labels = np.asarray([ln.strip() for ln in Path(args.labels).read_text().splitlines() if ln.strip()])
            if len(labels) != oracle.size:
                raise MismatchedEntities(f"{len(labels)} labels for {oracle.size} entities")
        return oracle, labels, "metric"
    ps = load_points(args.input, label_col=_label_col(args.label_col), header=args.header)
    return euclidean_oracle(ps), ps.labels, None


def _ri_rows(dendro, labels):
    truth = Partition(labels)
    rows = []
    for t in range(dendro.iterations + 1):
        p = dendro.partition(t)
        ri = rand_index(p, truth) if len(p) > 1 else 1.0
        rows.append((t, p.k, ri))
    return rows


def cmd_cluster(args):
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    oracle, labels, force = _load_dataset(args)
    if force:
        args.mode = force
    dendro = cluster(oracle, _config(args))
    (out / "dendrogram.json").write_text(dendro.to_json(indent=1))
    if args.newick:
        (out / "dendrogram.nwk").write_text(dendro.to_newick() + "\n")
    for t in range(dendro.iterations + 1):
        write_partition(out / f"partition_iter{t}.csv", dendro.partition(t))
    if labels is not None:
        write_rows(out / "rand_index.csv", ["iteration", "K", "rand_index"], _ri_rows(dendro, labels))


def _tpr_rows(g, parts):
    return [(p.k, tpr(g, p)) for p in parts]


def cmd_communities(args):
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    g = load_graph(args.input, weighted=args.weighted)
    part = detect_communities(g, _config(args))
    write_partition(out / "rs_partition.csv", part, ids=g.names)
    series = resolution_scan(g, part)
    write_rows(out / "resolution_scan.csv", ["step", "u", "v", "K"],
               [(i + 1, g.names[u], g.names[v], p.k) for i, ((u, v), p) in enumerate(series.merges)])
    write_rows(out / "rs_tpr.csv", ["K", "tpr"], _tpr_rows(g, series.partitions()))
    if not args.skip_gn:
        write_rows(out / "gn_tpr.csv", ["K", "tpr"], _tpr_rows(g, girvan_newman(g)))


def cmd_evaluate(args):
    truth = read_partition(args.truth)
    pred = read_partition(args.pred)
    if set(truth) != set(pred):
        raise MismatchedEntities("partition files cover different entity ids")
    result = {}
    if args.graph:
        g = load_graph(args.graph)
        index = {str(name): i for i, name in enumerate(g.names)}
        if set(pred) != set(index):
            raise MismatchedEntities("partition does not cover the graph's nodes")
        ids = sorted(index, key=index.get)
    else:
        ids = sorted(truth)
    x = Partition(np.asarray([truth[i] for i in ids]))
    y = Partition(np.asarray([pred[i] for i in ids]))
    result["rand_index"] = rand_index(x, y)
    if args.graph:
        result["tpr_truth"] = tpr(g, x)
        result["tpr_pred"] = tpr(g, y)
    text = json.dumps(result, indent=1)
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "evaluation.json").write_text(text)
    print(text)


def _parse_sizes(text):
    sizes = [int(s) for s in text.split(",") if s.strip()]
    if not sizes or min(sizes) < 1:
        raise ValueError(f"bad --sizes {text!r}")
    return sizes


def time_algorithms(sizes, seed=0, dim=2, alpha=1.5):
    """Wall time of RS and GA (full hierarchy) on uniform random points."""
    rng = np.random.default_rng(seed)
    rows = []
    for n in sizes:
        oracle = euclidean_oracle(PointSet(rng.random((n, dim))))
        cfg = RsConfig(alpha=alpha, seed=seed, jitter=JitterConfig(seed=seed))
        t0 = time.perf_counter()
        cluster(oracle, cfg)
        rows.append(("RS", n, time.perf_counter() - t0))
        t0 = time.perf_counter()
        average_linkage(oracle)
        rows.append(("GA", n, time.perf_counter() - t0))
    return rows


def cmd_bench(args):
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = time_algorithms(_parse_sizes(args.sizes), seed=args.seed, dim=args.dim, alpha=args.alpha)
    write_rows(out / "timings.csv", ["algorithm", "n", "seconds"], rows)


def _parse_grid(text):
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise ValueError(f"--grid must be start:stop:step, got {text!r}") from None
    if step <= 0 or stop < start:
        raise ValueError(f"bad --grid {text!r}")
    count = int(round((stop - start) / step)) + 1
    return [round(start + i * step, 10) for i in range(count)]


def cmd_sweep(args):
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    oracle, labels, force = _load_dataset(args)
    if labels is None:
        raise ValueError("sweep-alpha needs ground-truth labels")
    if force:
        args.mode = force
    rows = []
    for alpha in _parse_grid(args.grid):
        dendro = cluster(oracle, _config(args, alpha=alpha))
        t, k, ri = max(_ri_rows(dendro, labels)[1:] or [(0, len(labels), 0.0)], key=lambda r: r[2])
        rows.append((alpha, t, k, ri))
    write_rows(out / "sweep_alpha.csv", ["alpha", "best_iteration", "K", "rand_index"], rows)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rsclust", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("input", help="data file")
        p.add_argument("--alpha", type=float, default=1.5)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--jitter-scale", type=float, default=1e-9)
        p.add_argument("--out-dir", default="rs_out")

    def points(p):
        p.add_argument("--label-col", default=None, help="'last', 'first', an index, or 'none'")
        p.add_argument("--header", action=argparse.BooleanOptionalAction, default=None)
        p.add_argument("--matrix", action="store_true", help="input is a square distance matrix")
        p.add_argument("--labels", help="ground-truth labels (one per line) for --matrix input")
        p.add_argument("--mode", choices=["coordinate", "metric"], default="coordinate")

    p = sub.add_parser("cluster", help="RS hierarchy over a point or distance-matrix file")
    common(p)
    points(p)
    p.add_argument("--max-iterations", type=int, default=None)
    p.add_argument("--newick", action="store_true")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("communities", help="RS and Girvan-Newman communities of an edge list")
    common(p)
    p.add_argument("--weighted", action="store_true")
    p.add_argument("--skip-gn", action="store_true")
    p.set_defaults(func=cmd_communities)

    p = sub.add_parser("evaluate", help="Rand Index / TPR between partition files")
    p.add_argument("--truth", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--graph")
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bench", help="time RS against group average on random points")
    common(p, needs_input=False)
    p.add_argument("--sizes", default="500,1000,2000")
    p.add_argument("--dim", type=int, default=2)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("sweep-alpha", help="best-iteration Rand Index over an alpha grid")
    common(p)
    points(p)
    p.add_argument("--grid", default="1.1:3.0:0.1")
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (RsError, OSError, ValueError) as exc:
        record = {"error": type(exc).__name__, "message": str(exc), "command": args.command}
        print(json.dumps(record), file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
