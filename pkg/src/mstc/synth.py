"""Deterministic synthetic heatmap families for tests and characterization.

All randomness comes from a counter-based SplitMix64 stream: pixel index i
under seed s yields mix64(s + (i+1) * 0x9E3779B97F4A7C15), where mix64 is
the SplitMix64 finalizer. Identical specs therefore produce bit-identical
maps in any implementation, with no hidden generator state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .errors import InvalidSpecError
from .heatmap import AttributionMap

KINDS = (
    "gaussian_blob",
    "multi_blob",
    "uniform_noise",
    "ring",
    "fragmented_noise_plus_blob",
)

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for one synthetic map; identical specs give identical maps."""

    kind: str
    height: int
    width: int
    params: Mapping[str, Any] = field(default_factory=dict)
    seed: int = 0

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": self.kind,
                "height": self.height,
                "width": self.width,
                "params": dict(self.params),
                "seed": self.seed,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "SynthSpec":
        data = json.loads(text)
        return cls(
            kind=data["kind"],
            height=int(data["height"]),
            width=int(data["width"]),
            params=data.get("params", {}),
            seed=int(data.get("seed", 0)),
        )


def _mix64(x: np.ndarray) -> np.ndarray:
    z = x.astype(np.uint64)
    z ^= z >> np.uint64(30)
    z *= _MIX1
    z ^= z >> np.uint64(27)
    z *= _MIX2
    z ^= z >> np.uint64(31)
    return z


def unit_noise(seed: int, count: int) -> np.ndarray:
    """`count` doubles in [0, 1) from the counter-based stream for `seed`."""
    idx = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = _mix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + idx * _GOLDEN)
    return (z >> np.uint64(11)).astype(np.float64) * 2.0**-53


def _check_center(center, height: int, width: int) -> tuple[float, float]:
    try:
        r, c = float(center[0]), float(center[1])
    except (TypeError, IndexError, ValueError) as exc:
        raise InvalidSpecError(f"malformed center {center!r}") from exc
    if not (0 <= r < height and 0 <= c < width):
        raise InvalidSpecError(f"center {center!r} outside {height}x{width} image")
    return r, c


def _dist2_grid(height: int, width: int, center) -> np.ndarray:
    r, c = center
    rr = (np.arange(height, dtype=np.float64) - r)[:, None]
    cc = (np.arange(width, dtype=np.float64) - c)[None, :]
    return rr**2 + cc**2


def generate(spec: SynthSpec) -> AttributionMap:
    """Render a spec to a map; raises InvalidSpecError on bad parameters."""
    if spec.kind not in KINDS:
        raise InvalidSpecError(f"unknown kind {spec.kind!r}; expected one of {KINDS}")
    h, w = int(spec.height), int(spec.width)
    if h < 1 or w < 1:
        raise InvalidSpecError(f"dimensions must be positive, got {h}x{w}")
    p = dict(spec.params)
    sigma = float(p.get("sigma", min(h, w) / 8.0))
    if sigma <= 0:
        raise InvalidSpecError(f"sigma must be positive, got {sigma}")

    if spec.kind == "uniform_noise":
        return AttributionMap(unit_noise(spec.seed, h * w).reshape(h, w))

    if spec.kind == "gaussian_blob":
        center = _check_center(p.get("center", (h // 2, w // 2)), h, w)
        return AttributionMap(np.exp(-_dist2_grid(h, w, center) / (2.0 * sigma**2)))

    if spec.kind == "multi_blob":
        centers = p.get("centers")
        if not centers:
            raise InvalidSpecError("multi_blob requires a non-empty 'centers' list")
        total = np.zeros((h, w), dtype=np.float64)
        for center in centers:
            cr, cc = _check_center(center, h, w)
            total += np.exp(-_dist2_grid(h, w, (cr, cc)) / (2.0 * sigma**2))
        return AttributionMap(total)

    if spec.kind == "ring":
        center = _check_center(p.get("center", (h // 2, w // 2)), h, w)
        radius = float(p.get("radius", min(h, w) / 4.0))
        if radius <= 0:
            raise InvalidSpecError(f"radius must be positive, got {radius}")
        d = np.sqrt(_dist2_grid(h, w, center))
        return AttributionMap(np.exp(-((d - radius) ** 2) / (2.0 * sigma**2)))

    # fragmented_noise_plus_blob
    center = _check_center(p.get("center", (h // 2, w // 2)), h, w)
    amplitude = float(p.get("noise_amplitude", 0.3))
    if amplitude < 0:
        raise InvalidSpecError(f"noise_amplitude must be >= 0, got {amplitude}")
    blob = np.exp(-_dist2_grid(h, w, center) / (2.0 * sigma**2))
    noise = unit_noise(spec.seed, h * w).reshape(h, w)
    return AttributionMap(blob + amplitude * noise)


# Reference fixtures: one tight blob, two well-separated blobs, and pure
# noise on the same 128x128 grid. At the default 80th percentile all three
# retain the same node count, so score differences are purely structural.
REFERENCE_SIZE = 128


def reference_blob() -> SynthSpec:
    return SynthSpec("gaussian_blob", REFERENCE_SIZE, REFERENCE_SIZE, {"sigma": 12.0}, seed=11)


def reference_multi_blob() -> SynthSpec:
    return SynthSpec(
        "multi_blob",
        REFERENCE_SIZE,
        REFERENCE_SIZE,
        {"centers": [(40, 40), (88, 88)], "sigma": 9.0},
        seed=12,
    )


def reference_noise() -> SynthSpec:
    return SynthSpec("uniform_noise", REFERENCE_SIZE, REFERENCE_SIZE, seed=13)


def reference_specs() -> dict[str, SynthSpec]:
    return {
        "blob": reference_blob(),
        "multi_blob": reference_multi_blob(),
        "noise": reference_noise(),
    }
