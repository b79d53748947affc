"""Structural compactness scoring for 2D attribution heatmaps.

Scores a heatmap by thresholding its most salient pixels, connecting them
into a k-nearest-neighbor graph, and combining the convex hull area
(spread) with the minimum spanning tree length (cohesion) into a single
compactness value.
"""

from ._kernels import BACKEND as kernel_backend
from .baselines import complexity_entropy, effective_complexity, pearson, sparseness_gini
from .errors import (
    AllZeroError,
    DisconnectedGraphError,
    EmptyPointSetError,
    FormatError,
    InvalidPercentileError,
    InvalidSpecError,
    LengthMismatchError,
    MstcError,
    NonFiniteValueError,
    NonPositiveAreaError,
    TooFewNodesError,
    ZeroLengthError,
    ZeroVarianceError,
    error_code,
)
from .geometry import (
    ConvexHull,
    SpanningTree,
    convex_hull,
    export_tree_csv,
    export_tree_dot,
    minimum_spanning_tree,
)
from .graph import SpatialGraph, build_knn_graph, connected_components, export_edges_csv
from .heatmap import (
    AttributionMap,
    SalientPointSet,
    absolute,
    bilinear_resize,
    detect_format,
    load_map,
    normalize_maxabs,
    percentile_threshold,
    save_map,
)
from .metric import (
    SCALE_MODES,
    CompactnessReport,
    MetricConfig,
    MstcArtifacts,
    check_bounds,
    compute_mstc,
    compute_mstc_detail,
    q_cohesion,
    q_spread,
)
from .synth import SynthSpec, generate, reference_specs, unit_noise

__version__ = "0.1.0"

__all__ = [
    "AllZeroError",
    "AttributionMap",
    "CompactnessReport",
    "ConvexHull",
    "DisconnectedGraphError",
    "EmptyPointSetError",
    "FormatError",
    "InvalidPercentileError",
    "InvalidSpecError",
    "LengthMismatchError",
    "MetricConfig",
    "MstcArtifacts",
    "MstcError",
    "NonFiniteValueError",
    "NonPositiveAreaError",
    "SCALE_MODES",
    "SalientPointSet",
    "SpanningTree",
    "SpatialGraph",
    "SynthSpec",
    "TooFewNodesError",
    "ZeroLengthError",
    "ZeroVarianceError",
    "absolute",
    "bilinear_resize",
    "build_knn_graph",
    "check_bounds",
    "complexity_entropy",
    "compute_mstc",
    "compute_mstc_detail",
    "connected_components",
    "convex_hull",
    "detect_format",
    "effective_complexity",
    "error_code",
    "export_edges_csv",
    "export_tree_csv",
    "export_tree_dot",
    "generate",
    "kernel_backend",
    "load_map",
    "minimum_spanning_tree",
    "normalize_maxabs",
    "pearson",
    "percentile_threshold",
    "q_cohesion",
    "q_spread",
    "reference_specs",
    "save_map",
    "sparseness_gini",
    "unit_noise",
    "__version__",
]
