"""Hierarchical clustering supported by reciprocal nearest neighbors (RS)."""

from .baselines import Merge, average_linkage, group_average
from .distance import (
    DistanceOracle,
    JitterConfig,
    PointSet,
    euclidean_oracle,
    graph_oracle,
    jitter,
    matrix_oracle,
)
from .graph import Graph
from .hierarchy import (
    AtEntity,
    Dendrogram,
    Midpoint,
    Partition,
    Root,
    RsConfig,
    cluster,
    partition_at_iteration,
    root_distance_coordinate,
    root_distance_metric,
)
from .metrics import betweenness_edge, betweenness_node, pair_counts, rand_index, tpr
from .netcluster import (
    absorb_small,
    commute_distance,
    detect_communities,
    girvan_newman,
    laplacian,
    pseudo_inverse,
    resolution_scan,
)
from .sct import Sct, build_chain, construct_scts, depth, prune, prune_threshold

__version__ = "0.1.0"

__all__ = [
    "AtEntity", "Dendrogram", "DistanceOracle", "Graph", "JitterConfig", "Merge", "Midpoint",
    "Partition", "PointSet", "Root", "RsConfig", "Sct",
    "absorb_small", "average_linkage", "betweenness_edge", "betweenness_node", "build_chain",
    "cluster", "commute_distance", "construct_scts", "depth", "detect_communities",
    "euclidean_oracle", "girvan_newman", "graph_oracle", "group_average", "jitter",
    "laplacian", "matrix_oracle", "pair_counts", "partition_at_iteration", "prune",
    "prune_threshold", "pseudo_inverse", "rand_index", "resolution_scan",
    "root_distance_coordinate", "root_distance_metric", "tpr",
]
