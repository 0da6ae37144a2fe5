"""Agglomerative clustering of constraint confidence series."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.cluster import hierarchy

LINKAGES = ("ward", "weighted")
METRICS = ("euclidean", "correlation")


@dataclass
class ClusterResult:
    labels: np.ndarray        # per-row cluster id, 0-based
    n_clusters: int
    leaf_order: np.ndarray    # dendrogram leaf order (row indices)


def cluster_series(
    matrix: np.ndarray,
    linkage: str = "ward",
    metric: str = "euclidean",
    cut_threshold: float = 6.0,
) -> ClusterResult:
    """Cut an agglomerative dendrogram at a distance threshold.

    Cluster ids are assigned by first appearance in dendrogram leaf order, so
    results are deterministic for a given input. A cut near zero yields all
    singletons; a huge cut yields one cluster.
    """
    if linkage not in LINKAGES:
        raise ValueError(f"linkage must be one of {LINKAGES}, got {linkage!r}")
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")
    if linkage == "ward" and metric != "euclidean":
        raise ValueError("ward linkage requires the euclidean metric")
    if cut_threshold <= 0:
        raise ValueError("cut_threshold must be positive")
    arr = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    n = arr.shape[0]
    if n == 0:
        raise ValueError("cannot cluster an empty matrix")
    if n == 1:
        return ClusterResult(np.zeros(1, dtype=int), 1, np.zeros(1, dtype=int))

    z = hierarchy.linkage(arr, method=linkage, metric=metric)
    raw = hierarchy.fcluster(z, t=cut_threshold, criterion="distance")
    order = hierarchy.leaves_list(z)
    remap: dict[int, int] = {}
    for row in order:
        if raw[row] not in remap:
            remap[raw[row]] = len(remap)
    labels = np.array([remap[r] for r in raw], dtype=int)
    return ClusterResult(labels, len(remap), order)
