"""Compactness score assembly: spread, cohesion, and the scaled product.

The score favors attributions whose salient pixels cover a small area
(spread = 1/sqrt(hull area)) and form densely interconnected structures
(cohesion = |V| / MST length). Both factors are bounded on the 2D lattice:

    1/sqrt(h*w) <= spread <= sqrt(2)        (hull area in [1/2, h*w])
    0 < cohesion <= 2                        (minimum lattice distance is 1)
    spread * cohesion <= 2*sqrt(2)

When the hull is degenerate (fewer than 3 points, or collinear), spread
falls back to 1/sqrt(h^2 + w^2), the inverse image diagonal.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping

from .errors import (
    DisconnectedGraphError,
    NonPositiveAreaError,
    TooFewNodesError,
    ZeroLengthError,
)
from .geometry import ConvexHull, SpanningTree, convex_hull, minimum_spanning_tree
from .graph import SpatialGraph, build_knn_graph, connected_components
from .heatmap import AttributionMap, SalientPointSet, absolute, percentile_threshold

SCALE_MODES = ("diag", "diag_x100", "none")
ON_DISCONNECT_MODES = ("error", "escalate_k")

_SQRT2 = math.sqrt(2.0)
_BOUND_EPS = 1e-12


@dataclass(frozen=True)
class MetricConfig:
    """Scoring hyperparameters.

    Defaults (k=500, 80th percentile) are the recommended operating point:
    large enough k that graphs form a single connected component on 224x224
    inputs while staying fast, and a threshold that keeps the top 20% of
    pixels. `scale_mode`: "diag" multiplies the raw score by sqrt(h^2+w^2),
    "diag_x100" by 100*sqrt(h^2+w^2) (the default; matches published score
    magnitudes), "none" leaves it raw.
    """

    k: int = 500
    percentile: float = 80.0
    scale_mode: str = "diag_x100"
    on_disconnect: str = "escalate_k"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.scale_mode not in SCALE_MODES:
            raise ValueError(f"scale_mode must be one of {SCALE_MODES}, got {self.scale_mode!r}")
        if self.on_disconnect not in ON_DISCONNECT_MODES:
            raise ValueError(
                f"on_disconnect must be one of {ON_DISCONNECT_MODES}, got {self.on_disconnect!r}"
            )


# flat serialization order, also used for CSV rows
REPORT_FIELDS = (
    "height",
    "width",
    "n_nodes",
    "mst_length",
    "hull_area",
    "hull_degenerate",
    "q_spread",
    "q_cohesion",
    "mstc_raw",
    "mstc_scaled",
    "scale_constant",
    "components_before",
    "k_effective",
    "k",
    "percentile",
    "scale_mode",
    "on_disconnect",
)


@dataclass(frozen=True)
class CompactnessReport:
    """All intermediate quantities of one scored map, plus the config echo."""

    height: int
    width: int
    n_nodes: int
    mst_length: float
    hull_area: float
    hull_degenerate: bool
    q_spread: float
    q_cohesion: float
    mstc_raw: float
    mstc_scaled: float
    scale_constant: float
    components_before: int
    k_effective: int
    k: int
    percentile: float
    scale_mode: str
    on_disconnect: str

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in REPORT_FIELDS}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: Mapping) -> "CompactnessReport":
        return cls(**{name: data[name] for name in REPORT_FIELDS})


@dataclass(frozen=True)
class MstcArtifacts:
    """Full pipeline output for export/plotting: report plus geometry."""

    report: CompactnessReport
    points: SalientPointSet
    graph: SpatialGraph
    tree: SpanningTree
    hull: ConvexHull


def q_spread(hull: ConvexHull, source_height: int, source_width: int) -> float:
    """Inverse square root of the hull area.

    Degenerate hulls use the image diagonal instead: 1/sqrt(h^2 + w^2).
    """
    if source_height < 1 or source_width < 1:
        raise ValueError("image dimensions must be positive")
    if hull.degenerate:
        return 1.0 / math.sqrt(source_height**2 + source_width**2)
    if hull.area <= 0.0:
        raise NonPositiveAreaError(
            f"non-degenerate hull with area {hull.area}; geometry is inconsistent"
        )
    return 1.0 / math.sqrt(hull.area)


def q_cohesion(n_nodes: int, mst_length: float) -> float:
    """Node count divided by MST length; peaks at 2 for two adjacent pixels."""
    if n_nodes < 2:
        raise TooFewNodesError(f"cohesion undefined for {n_nodes} node(s)")
    if mst_length <= 0.0:
        raise ZeroLengthError(f"MST length must be positive, got {mst_length}")
    return n_nodes / mst_length


def scale_constant(scale_mode: str, height: int, width: int) -> float:
    if scale_mode == "diag":
        return math.sqrt(height**2 + width**2)
    if scale_mode == "diag_x100":
        return 100.0 * math.sqrt(height**2 + width**2)
    if scale_mode == "none":
        return 1.0
    raise ValueError(f"unknown scale_mode {scale_mode!r}")


def compute_mstc_detail(amap: AttributionMap, config: MetricConfig | None = None) -> MstcArtifacts:
    """Run the full pipeline and keep the intermediate geometry.

    Pipeline: absolute value -> percentile threshold -> kNN graph ->
    connectivity check (escalating k if configured) -> MST + convex hull ->
    spread * cohesion -> scaling.
    """
    config = config or MetricConfig()
    pts = percentile_threshold(absolute(amap), config.percentile)
    n = len(pts)
    if n < 2:
        raise TooFewNodesError(
            f"only {n} salient point(s) at percentile {config.percentile}; need >= 2"
        )
    graph = build_knn_graph(pts, config.k)
    count, _ = connected_components(graph)
    components_before = count
    if count > 1:
        if config.on_disconnect == "error":
            raise DisconnectedGraphError(
                f"graph has {count} connected components at k={graph.k}; "
                "raise k or use on_disconnect='escalate_k'"
            )
        k_eff = graph.k
        while count > 1 and k_eff < n - 1:
            k_eff = min(2 * k_eff, n - 1)
            graph = build_knn_graph(pts, k_eff)
            count, _ = connected_components(graph)
    tree = minimum_spanning_tree(graph)
    hull = convex_hull(pts.points)
    spread = q_spread(hull, amap.height, amap.width)
    cohesion = q_cohesion(n, tree.total_length)
    raw = spread * cohesion
    const = scale_constant(config.scale_mode, amap.height, amap.width)
    report = CompactnessReport(
        height=amap.height,
        width=amap.width,
        n_nodes=n,
        mst_length=tree.total_length,
        hull_area=hull.area,
        hull_degenerate=hull.degenerate,
        q_spread=spread,
        q_cohesion=cohesion,
        mstc_raw=raw,
        mstc_scaled=raw * const,
        scale_constant=const,
        components_before=components_before,
        k_effective=graph.k,
        k=config.k,
        percentile=config.percentile,
        scale_mode=config.scale_mode,
        on_disconnect=config.on_disconnect,
    )
    return MstcArtifacts(report=report, points=pts, graph=graph, tree=tree, hull=hull)


def compute_mstc(amap: AttributionMap, config: MetricConfig | None = None) -> CompactnessReport:
    """Score one attribution map; see :func:`compute_mstc_detail`."""
    return compute_mstc_detail(amap, config).report


def check_bounds(report: CompactnessReport) -> bool:
    """Verify the lattice bounds on the raw (unscaled) quantities.

    Checks 1/sqrt(h*w) <= q_spread <= sqrt(2), 0 < q_cohesion <= 2, and
    q_spread * q_cohesion <= 2*sqrt(2), with 1e-12 slack for rounding. The
    q_spread lower bound only applies to non-degenerate hulls: the
    degenerate fallback 1/sqrt(h^2+w^2) sits below 1/sqrt(h*w) by design.
    """
    hw = report.height * report.width
    if not report.hull_degenerate and report.q_spread < 1.0 / math.sqrt(hw) - _BOUND_EPS:
        return False
    if report.q_spread > _SQRT2 + _BOUND_EPS:
        return False
    if not 0.0 < report.q_cohesion <= 2.0 + _BOUND_EPS:
        return False
    if not 0.0 < report.mstc_raw <= 2.0 * _SQRT2 + _BOUND_EPS:
        return False
    return True
