"""Batch scoring, hyperparameter sweeps, correlations, and plot-ready exports."""

from __future__ import annotations

import dataclasses
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .baselines import complexity_entropy, effective_complexity, sparseness_gini
from .errors import MstcError, ZeroVarianceError, error_code
from .geometry import export_tree_csv, export_tree_dot
from .heatmap import AttributionMap, bilinear_resize, load_map
from .metric import REPORT_FIELDS, MetricConfig, MstcArtifacts, compute_mstc_detail

SWEEP_AXES = ("none", "k", "percentile", "resolution")

# results.csv column order (stable; documented in the README)
RESULT_COLUMNS = (
    "sample",
    "label",
    "sweep_axis",
    "sweep_value",
    *REPORT_FIELDS,
    "sparseness",
    "complexity",
    "effective_complexity",
    "seconds",
    "error",
)

_AGG_METRICS = (
    "n_nodes",
    "mst_length",
    "hull_area",
    "q_spread",
    "q_cohesion",
    "mstc_raw",
    "mstc_scaled",
    "sparseness",
    "complexity",
    "effective_complexity",
    "seconds",
)

AGGREGATE_COLUMNS = (
    "sweep_axis",
    "sweep_value",
    "n_samples",
    "n_failed",
    *(f"mean_{m}" for m in _AGG_METRICS),
    *(f"std_{m}" for m in _AGG_METRICS),
)


@dataclass
class RunConfig:
    """One batch run: inputs, metric settings, optional sweep, exports."""

    inputs: list[tuple[Path, str]]
    metric: MetricConfig = field(default_factory=MetricConfig)
    sweep_axis: str = "none"
    sweep_values: tuple = ()
    out_dir: Path | None = None
    export_reports: bool = False
    export_edges: bool = False
    export_dot: bool = False
    workers: int = 1
    eps: float = 0.0

    def __post_init__(self):
        if self.sweep_axis not in SWEEP_AXES:
            raise ValueError(f"sweep axis must be one of {SWEEP_AXES}, got {self.sweep_axis!r}")
        if self.sweep_axis == "none":
            if self.sweep_values:
                raise ValueError("sweep values given without a sweep axis")
        else:
            values = tuple(self.sweep_values)
            if not values:
                raise ValueError("sweep requires a non-empty value list")
            if any(b <= a for a, b in zip(values, values[1:])):
                raise ValueError("sweep values must be strictly increasing")
            self.sweep_values = values
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class BatchResult:
    rows: list[dict]
    aggregates: list[dict]
    any_failed: bool


def read_manifest(path) -> list[tuple[Path, str]]:
    """Manifest lines are `path[,label]`; blank lines and # comments skipped.

    Relative paths resolve against the manifest's directory; the label
    defaults to the file stem.
    """
    base = Path(path).parent
    inputs: list[tuple[Path, str]] = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",", 1)]
        target = Path(parts[0])
        if not target.is_absolute():
            target = base / target
        label = parts[1] if len(parts) == 2 and parts[1] else target.stem
        inputs.append((target, label))
    return inputs


def _sweep_config(base: MetricConfig, axis: str, value) -> MetricConfig:
    if axis == "k":
        return dataclasses.replace(base, k=int(value))
    if axis == "percentile":
        return dataclasses.replace(base, percentile=float(value))
    return base


def _score_task(path: Path, label: str, axis: str, value, config: RunConfig):
    row = {name: "" for name in RESULT_COLUMNS}
    row["sample"] = str(path)
    row["label"] = label
    row["sweep_axis"] = axis
    row["sweep_value"] = "" if axis == "none" else value
    started = time.perf_counter()
    try:
        amap = load_map(path)
        if axis == "resolution":
            side = int(value)
            amap = bilinear_resize(amap, side, side)
        cfg = _sweep_config(config.metric, axis, value)
        artifacts = compute_mstc_detail(amap, cfg)
        row.update(artifacts.report.to_dict())
        row["sparseness"] = sparseness_gini(amap.values)
        row["complexity"] = complexity_entropy(amap.values)
        row["effective_complexity"] = effective_complexity(amap.values, config.eps)
        row["seconds"] = time.perf_counter() - started
        return row, artifacts, amap
    except (MstcError, FileNotFoundError, OSError, ValueError) as exc:
        row["error"] = error_code(exc)
        row["seconds"] = time.perf_counter() - started
        return row, None, None


def _aggregate(rows: list[dict], axis: str, value) -> dict:
    agg = {name: "" for name in AGGREGATE_COLUMNS}
    agg["sweep_axis"] = axis
    agg["sweep_value"] = "" if axis == "none" else value
    ok = [r for r in rows if not r["error"]]
    agg["n_samples"] = len(rows)
    agg["n_failed"] = len(rows) - len(ok)
    for metric in _AGG_METRICS:
        values = np.array([float(r[metric]) for r in ok], dtype=np.float64)
        if values.size:
            agg[f"mean_{metric}"] = float(values.mean())
            # sample standard deviation; undefined for a single observation
            agg[f"std_{metric}"] = float(values.std(ddof=1)) if values.size > 1 else ""
    return agg


def _export_sample(artifacts: MstcArtifacts, out_dir: Path, stem: str, config: RunConfig) -> None:
    if config.export_reports:
        (out_dir / f"{stem}.report.json").write_text(
            artifacts.report.to_json(indent=2) + "\n", encoding="utf-8"
        )
    if config.export_edges:
        export_tree_csv(artifacts.tree, out_dir / f"{stem}.tree.csv")
    if config.export_dot:
        export_tree_dot(artifacts.tree, artifacts.graph.node_coords, out_dir / f"{stem}.tree.dot")


def run_batch(config: RunConfig) -> BatchResult:
    """Score every (sample, sweep point) pair; failures land in the error column.

    Rows come back in deterministic input x sweep order regardless of the
    worker count; aggregates summarize each sweep point with mean and sample
    standard deviation.
    """
    axis = config.sweep_axis
    points = list(config.sweep_values) if axis != "none" else [None]
    tasks = [
        (path, label, axis, value)
        for value in points
        for (path, label) in config.inputs
    ]
    results: list[tuple[dict, MstcArtifacts | None, AttributionMap | None]] = [None] * len(tasks)
    if config.workers == 1:
        for idx, task in enumerate(tasks):
            results[idx] = _score_task(task[0], task[1], task[2], task[3], config)
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            futures = {
                pool.submit(_score_task, *task, config): idx for idx, task in enumerate(tasks)
            }
            for future, idx in futures.items():
                results[idx] = future.result()

    rows = [entry[0] for entry in results]
    aggregates = []
    for value in points:
        group = [r for r in rows if r["sweep_value"] == ("" if value is None else value)]
        aggregates.append(_aggregate(group, axis, value))

    if config.out_dir is not None:
        out_dir = Path(config.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        write_csv(out_dir / "results.csv", RESULT_COLUMNS, rows)
        write_csv(out_dir / "aggregates.csv", AGGREGATE_COLUMNS, aggregates)
        for (row, artifacts, _amap) in results:
            if artifacts is None:
                continue
            stem = Path(row["sample"]).stem
            if row["sweep_axis"] != "none":
                stem = f"{stem}_{row['sweep_axis']}{row['sweep_value']}"
            _export_sample(artifacts, out_dir, stem, config)

    return BatchResult(
        rows=rows,
        aggregates=aggregates,
        any_failed=any(r["error"] for r in rows),
    )


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path, columns, rows: list[dict]) -> None:
    with open(Path(path), "w", encoding="utf-8") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_format_cell(row.get(col, "")) for col in columns) + "\n")


def read_results_csv(path) -> list[dict]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        return []
    header = lines[0].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[1:]]


def correlate(rows: list[dict], metric_a: str, metric_b: str, group_by: list[str] | None = None):
    """Pearson r of two result columns per group.

    Groups with a constant column get an empty r and a zero-variance note;
    groups with fewer than two valid rows are noted as too small.
    """
    group_by = group_by or []
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        if row.get("error"):
            continue
        key = tuple(str(row.get(col, "")) for col in group_by)
        groups.setdefault(key, []).append(row)
    out = []
    from .baselines import pearson as _pearson

    for key in sorted(groups):
        members = groups[key]
        entry = {col: val for col, val in zip(group_by, key)}
        entry.update({"metric_a": metric_a, "metric_b": metric_b, "n": len(members)})
        if len(members) < 2:
            entry.update({"r": "", "note": "too-few-rows"})
        else:
            xs = [float(r[metric_a]) for r in members]
            ys = [float(r[metric_b]) for r in members]
            try:
                entry.update({"r": _pearson(xs, ys), "note": ""})
            except ZeroVarianceError:
                entry.update({"r": "", "note": "zero-variance"})
        out.append(entry)
    return out


def export_overlay(artifacts: MstcArtifacts, out_dir, stem: str) -> dict[str, Path]:
    """Write the plot-ready bundle for one sample.

    Produces `<stem>.points.csv` (salient coordinates), `<stem>.edges.csv`
    (MST edge list), `<stem>.tree.dot` (Graphviz overlay with pinned
    positions), and `<stem>.report.json`. Byte-deterministic.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "points": out_dir / f"{stem}.points.csv",
        "edges": out_dir / f"{stem}.edges.csv",
        "dot": out_dir / f"{stem}.tree.dot",
        "report": out_dir / f"{stem}.report.json",
    }
    with open(paths["points"], "w", encoding="utf-8") as fh:
        fh.write("row,col\n")
        for r, c in artifacts.points.points.tolist():
            fh.write(f"{r},{c}\n")
    export_tree_csv(artifacts.tree, paths["edges"])
    export_tree_dot(artifacts.tree, artifacts.graph.node_coords, paths["dot"])
    paths["report"].write_text(artifacts.report.to_json(indent=2) + "\n", encoding="utf-8")
    return paths
