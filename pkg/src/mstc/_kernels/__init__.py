"""Kernel backend selection.

The compiled extension is preferred when importable; the numpy fallback is
contractually identical (same results bit for bit).  Set MSTC_FORCE_BACKEND
to "fallback" or "compiled" to override, e.g. for benchmarking.
"""

import os

from . import _fallback

_forced = os.environ.get("MSTC_FORCE_BACKEND", "").strip().lower()

if _forced == "fallback":
    _impl = _fallback
elif _forced == "compiled":
    from . import _core as _impl  # type: ignore[no-redef]
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _fallback

BACKEND = _impl.BACKEND
knn_neighbors = _impl.knn_neighbors
kruskal = _impl.kruskal
component_labels = _impl.component_labels
