"""Minimum spanning tree and convex hull over salient points."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .errors import DisconnectedGraphError, TooFewNodesError
from .graph import SpatialGraph


@dataclass(frozen=True, eq=False)
class SpanningTree:
    """MST edge list (in acceptance order) with its total Euclidean length."""

    edge_index: np.ndarray
    weights: np.ndarray
    total_length: float

    @property
    def n_edges(self) -> int:
        return self.edge_index.shape[0]

    def edge_list(self) -> list[tuple[int, int, float]]:
        return [
            (int(i), int(j), float(w))
            for (i, j), w in zip(self.edge_index, self.weights)
        ]


@dataclass(frozen=True, eq=False)
class ConvexHull:
    """Strictly convex counter-clockwise vertex ring with shoelace area.

    `degenerate` is set iff the input has fewer than 3 distinct points or
    all points are collinear; the area is then 0 and `vertices` holds the
    extreme point(s).
    """

    vertices: np.ndarray
    area: float
    degenerate: bool


def minimum_spanning_tree(graph: SpatialGraph) -> SpanningTree:
    """Tree of minimum total weight over the graph's edge set.

    Edges are considered in ascending (weight, i, j) order, so the selected
    tree is deterministic; the total length is unique regardless of ties.
    Raises DisconnectedGraphError when the graph has several components and
    TooFewNodesError below two nodes.
    """
    n = graph.n_nodes
    if n < 2:
        raise TooFewNodesError(f"spanning tree needs >= 2 nodes, got {n}")
    iu = graph.edge_index[:, 0]
    jv = graph.edge_index[:, 1]
    w = graph.weights
    order = np.lexsort((jv, iu, w))
    pos, total = _kernels.kruskal(
        np.ascontiguousarray(iu[order]),
        np.ascontiguousarray(jv[order]),
        np.ascontiguousarray(w[order]),
        n,
    )
    if pos.shape[0] != n - 1:
        n_components = n - pos.shape[0]
        raise DisconnectedGraphError(
            f"graph splits into {n_components} connected components at k={graph.k}; "
            "increase k to restore connectivity"
        )
    sel = order[pos]
    return SpanningTree(
        edge_index=graph.edge_index[sel],
        weights=w[sel],
        total_length=float(total),
    )


def _cross(o, a, b) -> int:
    return int((a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]))


def convex_hull(points) -> ConvexHull:
    """Monotone-chain convex hull with shoelace area.

    Points are (row, col) lattice coordinates; the ring is counter-clockwise
    when (row, col) is read as a right-handed (x, y) plane. Cross products
    and the shoelace sum are evaluated in exact integer arithmetic.
    """
    pts = np.ascontiguousarray(points, dtype=np.int64)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 1:
        raise ValueError("points must be a non-empty (n, 2) array")
    uniq = np.unique(pts, axis=0)  # sorted by (row, col)
    m = uniq.shape[0]
    if m == 1:
        return ConvexHull(vertices=uniq, area=0.0, degenerate=True)
    coords = [tuple(p) for p in uniq.tolist()]
    lower: list[tuple[int, int]] = []
    for p in coords:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[int, int]] = []
    for p in reversed(coords):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    ring = lower[:-1] + upper[:-1]
    if len(ring) < 3:
        # all points collinear: keep the two extreme endpoints
        return ConvexHull(
            vertices=np.array([coords[0], coords[-1]], dtype=np.int64),
            area=0.0,
            degenerate=True,
        )
    twice_area = 0
    for (x0, y0), (x1, y1) in zip(ring, ring[1:] + ring[:1]):
        twice_area += x0 * y1 - x1 * y0
    return ConvexHull(
        vertices=np.array(ring, dtype=np.int64),
        area=twice_area / 2.0,
        degenerate=False,
    )


def export_tree_csv(tree: SpanningTree, path) -> None:
    """MST edge list as CSV with header `i,j,weight`."""
    with open(Path(path), "w", encoding="utf-8") as fh:
        fh.write("i,j,weight\n")
        for i, j, w in tree.edge_list():
            fh.write(f"{i},{j},{repr(w)}\n")


def export_tree_dot(tree: SpanningTree, node_coords: np.ndarray, path) -> None:
    """Graphviz DOT with pinned node positions for heatmap overlays.

    Nodes are blue points placed at pos="col,row!"; edges are red lines.
    Output is byte-deterministic for identical inputs.
    """
    lines = [
        "graph spanning_tree {",
        '  node [shape=point, width=0.06, color=blue];',
        "  edge [color=red, penwidth=1.0];",
    ]
    for idx, (r, c) in enumerate(node_coords.tolist()):
        lines.append(f'  {idx} [pos="{c},{r}!"];')
    for i, j, _ in tree.edge_list():
        lines.append(f"  {i} -- {j};")
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
