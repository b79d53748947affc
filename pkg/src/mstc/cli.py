"""Command-line interface: score, sweep, correlate, export, synth."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .errors import MstcError, error_code
from .harness import (
    RunConfig,
    correlate,
    export_overlay,
    read_manifest,
    read_results_csv,
    run_batch,
    write_csv,
)
from .heatmap import load_map, save_map
from .metric import ON_DISCONNECT_MODES, SCALE_MODES, MetricConfig, compute_mstc_detail
from .synth import KINDS, SynthSpec, generate


def _add_metric_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--k", type=int, default=500, help="neighbor count (default 500)")
    parser.add_argument(
        "--percentile", type=float, default=80.0, help="salience percentile in (0,100), default 80"
    )
    parser.add_argument(
        "--scale-mode", choices=SCALE_MODES, default="diag_x100", help="score scaling constant"
    )
    parser.add_argument(
        "--on-disconnect",
        choices=ON_DISCONNECT_MODES,
        default="escalate_k",
        help="error out or double k until the graph is connected",
    )


def _metric_config(args) -> MetricConfig:
    return MetricConfig(
        k=args.k,
        percentile=args.percentile,
        scale_mode=args.scale_mode,
        on_disconnect=args.on_disconnect,
    )


def _add_batch_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("inputs", nargs="*", help="heatmap files (csv/npy/pgm)")
    parser.add_argument("--manifest", help="file with one `path[,label]` per line")
    parser.add_argument("--out", help="output directory for results.csv / aggregates.csv")
    parser.add_argument("--workers", type=int, default=1, help="concurrent samples (default 1)")
    parser.add_argument("--eps", type=float, default=0.0, help="effective-complexity tolerance")
    parser.add_argument("--export-reports", action="store_true", help="write per-sample report.json")
    parser.add_argument("--export-edges", action="store_true", help="write per-sample tree.csv")
    parser.add_argument("--export-dot", action="store_true", help="write per-sample tree.dot")


def _gather_inputs(args) -> list[tuple[Path, str]]:
    inputs: list[tuple[Path, str]] = []
    if args.manifest:
        inputs.extend(read_manifest(args.manifest))
    for item in args.inputs:
        p = Path(item)
        inputs.append((p, p.stem))
    if not inputs:
        raise SystemExit("no inputs given (positional paths or --manifest)")
    return inputs


def _cmd_score(args) -> int:
    inputs = _gather_inputs(args)
    if args.json:
        if len(inputs) != 1:
            raise SystemExit("--json expects exactly one input")
        amap = load_map(inputs[0][0])
        report = compute_mstc_detail(amap, _metric_config(args)).report
        print(report.to_json())
        return 0
    config = RunConfig(
        inputs=inputs,
        metric=_metric_config(args),
        out_dir=Path(args.out) if args.out else None,
        export_reports=args.export_reports,
        export_edges=args.export_edges,
        export_dot=args.export_dot,
        workers=args.workers,
        eps=args.eps,
    )
    result = run_batch(config)
    for row in result.rows:
        status = row["error"] or f"mstc_scaled={row['mstc_scaled']}"
        print(f"{row['sample']}: {status}")
    return 1 if result.any_failed else 0


def _cmd_sweep(args) -> int:
    inputs = _gather_inputs(args)
    values = [float(v) if args.axis == "percentile" else int(v) for v in args.values.split(",")]
    config = RunConfig(
        inputs=inputs,
        metric=_metric_config(args),
        sweep_axis=args.axis,
        sweep_values=tuple(values),
        out_dir=Path(args.out) if args.out else None,
        export_reports=args.export_reports,
        export_edges=args.export_edges,
        export_dot=args.export_dot,
        workers=args.workers,
        eps=args.eps,
    )
    result = run_batch(config)
    for agg in result.aggregates:
        print(
            f"{args.axis}={agg['sweep_value']}: mean mstc_scaled={agg['mean_mstc_scaled']} "
            f"(n={agg['n_samples']}, failed={agg['n_failed']})"
        )
    return 1 if result.any_failed else 0


def _cmd_correlate(args) -> int:
    rows = read_results_csv(args.results)
    group_by = [c for c in (args.group_by.split(",") if args.group_by else []) if c]
    table = correlate(rows, args.a, args.b, group_by)
    columns = [*group_by, "metric_a", "metric_b", "n", "r", "note"]
    if args.out:
        write_csv(args.out, columns, table)
    for entry in table:
        key = ",".join(str(entry[c]) for c in group_by) or "(all)"
        print(f"{key}: r({args.a}, {args.b}) = {entry['r']} {entry['note']}".rstrip())
    return 0


def _cmd_export(args) -> int:
    amap = load_map(args.input)
    artifacts = compute_mstc_detail(amap, _metric_config(args))
    stem = args.stem or Path(args.input).stem
    paths = export_overlay(artifacts, args.out, stem)
    for kind, path in paths.items():
        print(f"{kind}: {path}")
    return 0


def _cmd_synth(args) -> int:
    if args.spec:
        spec = SynthSpec.from_json(Path(args.spec).read_text(encoding="utf-8"))
    else:
        params = {}
        if args.sigma is not None:
            params["sigma"] = args.sigma
        if args.center:
            r, c = args.center.split(",")
            params["center"] = (float(r), float(c))
        if args.centers:
            params["centers"] = [
                tuple(float(x) for x in pair.split(",")) for pair in args.centers.split(";")
            ]
        if args.radius is not None:
            params["radius"] = args.radius
        if args.noise_amplitude is not None:
            params["noise_amplitude"] = args.noise_amplitude
        spec = SynthSpec(
            kind=args.kind, height=args.height, width=args.width, params=params, seed=args.seed
        )
    amap = generate(spec)
    save_map(amap, args.out)
    print(f"wrote {args.out} ({amap.height}x{amap.width}, kind={spec.kind}, seed={spec.seed})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mstc",
        description="Structural compactness scoring of 2D attribution heatmaps",
    )
    parser.add_argument("--version", action="version", version=f"mstc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_score = sub.add_parser("score", help="score heatmaps (optionally in batch)")
    _add_batch_flags(p_score)
    _add_metric_flags(p_score)
    p_score.add_argument(
        "--json", action="store_true", help="single input: print the report JSON to stdout"
    )
    p_score.set_defaults(func=_cmd_score)

    p_sweep = sub.add_parser("sweep", help="sweep k, percentile, or resolution")
    _add_batch_flags(p_sweep)
    _add_metric_flags(p_sweep)
    p_sweep.add_argument("--axis", choices=("k", "percentile", "resolution"), required=True)
    p_sweep.add_argument(
        "--values", required=True, help="comma-separated strictly increasing sweep values"
    )
    p_sweep.set_defaults(func=_cmd_sweep)

    p_corr = sub.add_parser("correlate", help="Pearson r between two results.csv columns")
    p_corr.add_argument("--results", required=True, help="results.csv from score/sweep")
    p_corr.add_argument("--a", required=True, help="first column name")
    p_corr.add_argument("--b", required=True, help="second column name")
    p_corr.add_argument("--group-by", default="", help="comma-separated grouping columns")
    p_corr.add_argument("--out", help="write the correlation table as CSV")
    p_corr.set_defaults(func=_cmd_correlate)

    p_export = sub.add_parser("export", help="plot-ready DOT/CSV bundle for one heatmap")
    p_export.add_argument("input", help="heatmap file")
    p_export.add_argument("--out", required=True, help="output directory")
    p_export.add_argument("--stem", help="output file stem (default: input stem)")
    _add_metric_flags(p_export)
    p_export.set_defaults(func=_cmd_export)

    p_synth = sub.add_parser("synth", help="generate a synthetic heatmap")
    p_synth.add_argument("--spec", help="JSON spec file (overrides the flags below)")
    p_synth.add_argument("--kind", choices=KINDS, default="uniform_noise")
    p_synth.add_argument("--height", type=int, default=128)
    p_synth.add_argument("--width", type=int, default=128)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--sigma", type=float)
    p_synth.add_argument("--center", help="row,col")
    p_synth.add_argument("--centers", help="row,col;row,col;...")
    p_synth.add_argument("--radius", type=float)
    p_synth.add_argument("--noise-amplitude", type=float)
    p_synth.add_argument("--out", required=True, help="output file (.csv/.npy/.pgm)")
    p_synth.set_defaults(func=_cmd_synth)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MstcError, FileNotFoundError, ValueError) as exc:
        payload = {"error": error_code(exc), "message": str(exc)}
        print(json.dumps(payload), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
