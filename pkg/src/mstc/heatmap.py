"""Attribution heatmap I/O, preprocessing, and salient-point selection.

Supported file formats (all single-channel):
  csv     one grid row per line, comma-separated decimal floats, UTF-8
  npy-v1  NPY version 1.0, little-endian float32/float64, C-order, 2D
  pgm     binary PGM (P5), maxval 1..65535, samples mapped linearly to [0, 1]
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, InvalidPercentileError, NonFiniteValueError

FORMATS = ("csv", "npy-v1", "pgm")

_NPY_MAGIC = b"\x93NUMPY"
_NPY_ALIGN = 64


@dataclass(frozen=True, eq=False)
class AttributionMap:
    """Dense 2D grid of real attribution scores (values may be negative).

    The value grid is stored as an immutable, C-contiguous float64 array;
    all entries are guaranteed finite.
    """

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64, order="C", copy=True)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("attribution map must be 2D with positive dimensions")
        if not np.isfinite(arr).all():
            raise NonFiniteValueError("attribution map contains NaN or Inf values")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class SalientPointSet:
    """(row, col) lattice coordinates retained by thresholding.

    Points are stored in row-major order; the set is a deterministic
    function of (map, percentile).
    """

    points: np.ndarray
    source_height: int
    source_width: int
    threshold_value: float
    percentile: float

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=np.int64)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 1:
            raise ValueError("points must be a non-empty (n, 2) array")
        if (pts[:, 0] < 0).any() or (pts[:, 0] >= self.source_height).any():
            raise ValueError("row coordinate out of bounds")
        if (pts[:, 1] < 0).any() or (pts[:, 1] >= self.source_width).any():
            raise ValueError("col coordinate out of bounds")
        packed = pts[:, 0] * self.source_width + pts[:, 1]
        if np.unique(packed).size != pts.shape[0]:
            raise ValueError("duplicate coordinates in point set")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]


def detect_format(path) -> str:
    """Infer the file format from the extension (.csv / .npy / .pgm)."""
    suffix = Path(path).suffix.lower()
    mapping = {".csv": "csv", ".npy": "npy-v1", ".pgm": "pgm"}
    if suffix not in mapping:
        raise FormatError(f"cannot infer format from extension {suffix!r}")
    return mapping[suffix]


def _norm_format(fmt: str) -> str:
    fmt = fmt.lower()
    if fmt == "npy":
        fmt = "npy-v1"
    if fmt not in FORMATS:
        raise FormatError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    return fmt


def load_map(path, format: str = "auto") -> AttributionMap:
    """Load a heatmap file into an :class:`AttributionMap`.

    Raises FileNotFoundError for a missing file, FormatError for malformed
    content, and NonFiniteValueError if the grid contains NaN/Inf.
    """
    p = Path(path)
    fmt = detect_format(p) if format == "auto" else _norm_format(format)
    if not p.is_file():
        raise FileNotFoundError(f"no such file: {p}")
    if fmt == "csv":
        grid = _load_csv(p)
    elif fmt == "npy-v1":
        grid = _load_npy(p)
    else:
        grid = _load_pgm(p)
    return AttributionMap(grid)


def save_map(amap: AttributionMap, path, format: str = "auto", pgm_maxval: int = 65535) -> None:
    """Write a heatmap to disk.

    csv and npy-v1 are lossless for float64 values; pgm clips to [0, 1]
    and quantizes to `pgm_maxval` levels.
    """
    p = Path(path)
    fmt = detect_format(p) if format == "auto" else _norm_format(format)
    if fmt == "csv":
        _save_csv(amap.values, p)
    elif fmt == "npy-v1":
        _save_npy(amap.values, p)
    else:
        _save_pgm(amap.values, p, pgm_maxval)


def _load_csv(p: Path) -> np.ndarray:
    rows: list[list[float]] = []
    width = None
    with open(p, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text:
                continue
            try:
                row = [float(tok) for tok in text.split(",")]
            except ValueError as exc:
                raise FormatError(f"{p}: line {lineno}: non-numeric field") from exc
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise FormatError(
                    f"{p}: line {lineno}: expected {width} fields, got {len(row)}"
                )
            rows.append(row)
    if not rows:
        raise FormatError(f"{p}: no data rows")
    return np.array(rows, dtype=np.float64)


def _save_csv(grid: np.ndarray, p: Path) -> None:
    with open(p, "w", encoding="utf-8") as fh:
        for row in grid:
            fh.write(",".join(repr(float(v)) for v in row))
            fh.write("\n")


def _load_npy(p: Path) -> np.ndarray:
    data = p.read_bytes()
    if data[:6] != _NPY_MAGIC:
        raise FormatError(f"{p}: missing NPY magic")
    if len(data) < 10:
        raise FormatError(f"{p}: truncated NPY header")
    major, minor = data[6], data[7]
    if (major, minor) != (1, 0):
        raise FormatError(f"{p}: NPY version {major}.{minor} unsupported (need 1.0)")
    hlen = int.from_bytes(data[8:10], "little")
    header_end = 10 + hlen
    if len(data) < header_end:
        raise FormatError(f"{p}: truncated NPY header")
    try:
        header = ast.literal_eval(data[10:header_end].decode("latin1").strip())
        descr = header["descr"]
        fortran = header["fortran_order"]
        shape = tuple(header["shape"])
    except Exception as exc:
        raise FormatError(f"{p}: malformed NPY header") from exc
    if descr not in ("<f8", "<f4"):
        raise FormatError(f"{p}: dtype {descr!r} unsupported (need <f4 or <f8)")
    if fortran:
        raise FormatError(f"{p}: Fortran-order arrays unsupported")
    if len(shape) != 2 or shape[0] < 1 or shape[1] < 1:
        raise FormatError(f"{p}: expected a 2D array, got shape {shape}")
    dtype = np.dtype(descr)
    need = shape[0] * shape[1] * dtype.itemsize
    body = data[header_end:]
    if len(body) != need:
        raise FormatError(f"{p}: body size {len(body)} != expected {need}")
    arr = np.frombuffer(body, dtype=dtype).reshape(shape)
    return arr.astype(np.float64)


def _save_npy(grid: np.ndarray, p: Path) -> None:
    # Mirrors numpy's v1.0 layout (64-byte aligned header) byte for byte.
    header = (
        "{'descr': '<f8', 'fortran_order': False, "
        f"'shape': ({grid.shape[0]}, {grid.shape[1]}), }}"
    )
    unpadded = len(_NPY_MAGIC) + 2 + 2 + len(header) + 1
    pad = (-unpadded) % _NPY_ALIGN
    header_bytes = (header + " " * pad + "\n").encode("latin1")
    with open(p, "wb") as fh:
        fh.write(_NPY_MAGIC)
        fh.write(bytes([1, 0]))
        fh.write(len(header_bytes).to_bytes(2, "little"))
        fh.write(header_bytes)
        fh.write(np.ascontiguousarray(grid, dtype="<f8").tobytes())


def _load_pgm(p: Path) -> np.ndarray:
    data = p.read_bytes()
    pos = 0

    def token() -> bytes:
        nonlocal pos
        while pos < len(data):
            ch = data[pos]
            if ch in b" \t\r\n":
                pos += 1
            elif ch == ord("#"):
                while pos < len(data) and data[pos] != ord("\n"):
                    pos += 1
            else:
                break
        start = pos
        while pos < len(data) and data[pos] not in b" \t\r\n":
            pos += 1
        if start == pos:
            raise FormatError(f"{p}: truncated PGM header")
        return data[start:pos]

    if token() != b"P5":
        raise FormatError(f"{p}: not a binary PGM (P5) file")
    try:
        width, height, maxval = int(token()), int(token()), int(token())
    except ValueError as exc:
        raise FormatError(f"{p}: non-numeric PGM header field") from exc
    if width < 1 or height < 1:
        raise FormatError(f"{p}: non-positive PGM dimensions")
    if not 1 <= maxval <= 65535:
        raise FormatError(f"{p}: PGM maxval {maxval} out of range [1, 65535]")
    pos += 1  # exactly one whitespace byte separates header and raster
    two_byte = maxval > 255
    need = width * height * (2 if two_byte else 1)
    raster = data[pos : pos + need]
    if len(raster) != need:
        raise FormatError(f"{p}: PGM raster truncated")
    raw = np.frombuffer(raster, dtype=">u2" if two_byte else "u1")
    return raw.reshape(height, width).astype(np.float64) / float(maxval)


def _save_pgm(grid: np.ndarray, p: Path, maxval: int) -> None:
    if not 1 <= maxval <= 65535:
        raise ValueError("pgm maxval must be in [1, 65535]")
    q = np.rint(np.clip(grid, 0.0, 1.0) * maxval)
    dtype = ">u2" if maxval > 255 else "u1"
    header = f"P5\n{grid.shape[1]} {grid.shape[0]}\n{maxval}\n".encode("ascii")
    with open(p, "wb") as fh:
        fh.write(header)
        fh.write(q.astype(dtype).tobytes())


def normalize_maxabs(amap: AttributionMap) -> AttributionMap:
    """Divide by the maximum absolute value; all-zero maps pass through."""
    peak = float(np.abs(amap.values).max())
    if peak == 0.0:
        return AttributionMap(amap.values)
    return AttributionMap(amap.values / peak)


def absolute(amap: AttributionMap) -> AttributionMap:
    """Elementwise absolute value."""
    return AttributionMap(np.abs(amap.values))


def bilinear_resize(amap: AttributionMap, new_height: int, new_width: int) -> AttributionMap:
    """Resample to (new_height, new_width) by bilinear interpolation.

    Sample positions follow the half-pixel-center convention with
    edge-clamped coordinates; output values never leave the input range.
    Constant maps and same-size resizes are reproduced exactly.
    """
    if new_height < 1 or new_width < 1:
        raise ValueError("target dimensions must be positive")
    src = amap.values
    h, w = src.shape
    x = (np.arange(new_height, dtype=np.float64) + 0.5) * (h / new_height) - 0.5
    y = (np.arange(new_width, dtype=np.float64) + 0.5) * (w / new_width) - 0.5
    np.clip(x, 0.0, h - 1.0, out=x)
    np.clip(y, 0.0, w - 1.0, out=y)
    x0 = np.floor(x).astype(np.int64)
    y0 = np.floor(y).astype(np.int64)
    x1 = np.minimum(x0 + 1, h - 1)
    y1 = np.minimum(y0 + 1, w - 1)
    fx = (x - x0)[:, None]
    fy = (y - y0)[None, :]
    # lerp form keeps constants exact: a + t*(b-a) == a whenever a == b
    top = src[np.ix_(x0, y0)]
    top = top + fy * (src[np.ix_(x0, y1)] - top)
    bot = src[np.ix_(x1, y0)]
    bot = bot + fy * (src[np.ix_(x1, y1)] - bot)
    out = top + fx * (bot - top)
    np.clip(out, src.min(), src.max(), out=out)
    return AttributionMap(out)


def percentile_threshold(amap: AttributionMap, percentile: float) -> SalientPointSet:
    """Select the most salient pixels by percentile.

    Keeps exactly N = max(1, round((1 - percentile/100) * h * w)) pixels with
    the largest values (round = half-up). Ties at the cut are resolved in
    ascending (row, col) order, so the retained count is exact and the set is
    a deterministic function of (map, percentile). The map must be
    nonnegative; apply :func:`absolute` first.
    """
    pct = float(percentile)
    if not 0.0 < pct < 100.0:
        raise InvalidPercentileError(f"percentile must be in (0, 100), got {percentile}")
    v = amap.values
    if (v < 0).any():
        raise ValueError("percentile_threshold expects a nonnegative map; apply absolute() first")
    total = v.size
    n_keep = int(math.floor((1.0 - pct / 100.0) * total + 0.5))
    n_keep = min(max(n_keep, 1), total)
    flat = v.ravel()
    # stable sort of -values == descending values with row-major tie order
    order = np.argsort(-flat, kind="stable")
    kept = order[:n_keep]
    threshold_value = float(flat[kept[-1]])
    kept = np.sort(kept)
    points = np.empty((n_keep, 2), dtype=np.int64)
    points[:, 0] = kept // amap.width
    points[:, 1] = kept % amap.width
    return SalientPointSet(
        points=points,
        source_height=amap.height,
        source_width=amap.width,
        threshold_value=threshold_value,
        percentile=pct,
    )
