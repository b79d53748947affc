"""Euclidean kNN graph over salient lattice points, plus connectivity analysis."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .errors import EmptyPointSetError
from .heatmap import SalientPointSet


@dataclass(frozen=True, eq=False)
class SpatialGraph:
    """Undirected weighted graph over (row, col) lattice points.

    Edges are unique pairs stored with i < j, sorted lexicographically;
    weights are Euclidean pixel distances. `k` is the effective neighbor
    count used during construction (min(requested k, n - 1)).
    """

    node_coords: np.ndarray
    edge_index: np.ndarray
    weights: np.ndarray
    k: int

    @property
    def n_nodes(self) -> int:
        return self.node_coords.shape[0]

    @property
    def n_edges(self) -> int:
        return self.edge_index.shape[0]

    def edge_list(self) -> list[tuple[int, int, float]]:
        return [
            (int(i), int(j), float(w))
            for (i, j), w in zip(self.edge_index, self.weights)
        ]


def _as_coords(points) -> np.ndarray:
    if isinstance(points, SalientPointSet):
        return points.points
    coords = np.ascontiguousarray(points, dtype=np.int64)
    if coords.ndim != 2 or coords.shape[1] != 2:
        raise ValueError("points must be an (n, 2) array of (row, col) coordinates")
    return coords


def build_knn_graph(points, k: int) -> SpatialGraph:
    """Symmetrized union of each node's k nearest neighbors.

    Nearest neighbors are exact under Euclidean distance; equidistant
    candidates are ordered by ascending (row, col), which coincides with
    ascending node index for the row-major point sets produced by
    thresholding. The undirected edge (a, b) exists iff b is among a's k
    nearest or vice versa.
    """
    coords = _as_coords(points)
    n = coords.shape[0]
    if n == 0:
        raise EmptyPointSetError("cannot build a graph over zero points")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if np.unique(coords, axis=0).shape[0] != n:
        raise ValueError("duplicate coordinates in point set")
    k_eff = min(k, n - 1)
    if k_eff == 0:
        return SpatialGraph(
            node_coords=coords,
            edge_index=np.empty((0, 2), dtype=np.int32),
            weights=np.empty(0, dtype=np.float64),
            k=0,
        )
    nb = _kernels.knn_neighbors(coords[:, 0], coords[:, 1], k_eff)
    a = np.repeat(np.arange(n, dtype=np.int64), k_eff)
    b = nb.ravel().astype(np.int64)
    packed = np.minimum(a, b) * n + np.maximum(a, b)
    packed = np.unique(packed)
    iu = (packed // n).astype(np.int32)
    jv = (packed % n).astype(np.int32)
    delta = coords[iu] - coords[jv]
    d2 = delta[:, 0] ** 2 + delta[:, 1] ** 2
    return SpatialGraph(
        node_coords=coords,
        edge_index=np.column_stack([iu, jv]),
        weights=np.sqrt(d2.astype(np.float64)),
        k=k_eff,
    )


def _canonical_labels(raw: np.ndarray) -> np.ndarray:
    # component ids ordered by smallest contained node index
    uniq, first = np.unique(raw, return_index=True)
    remap = np.empty(int(raw.max()) + 1, dtype=np.int64)
    remap[uniq[np.argsort(first, kind="stable")]] = np.arange(uniq.size)
    return remap[raw]


def connected_components(graph: SpatialGraph) -> tuple[int, np.ndarray]:
    """Component count and a canonical per-node labeling.

    Labels are deterministic: the component containing the smallest node
    index gets id 0, the next unseen one id 1, and so on.
    """
    raw = _kernels.component_labels(
        graph.n_nodes, graph.edge_index[:, 0], graph.edge_index[:, 1]
    )
    labels = _canonical_labels(np.asarray(raw))
    return int(labels.max()) + 1, labels


def export_edges_csv(graph: SpatialGraph, path) -> None:
    """Edge list as CSV with header `i,j,weight`, canonical i<j ordering."""
    with open(Path(path), "w", encoding="utf-8") as fh:
        fh.write("i,j,weight\n")
        for (i, j), w in zip(graph.edge_index, graph.weights):
            fh.write(f"{int(i)},{int(j)},{repr(float(w))}\n")
