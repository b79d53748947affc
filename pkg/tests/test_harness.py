"""Batch runner, sweeps, correlation tables, and overlay exports."""

import numpy as np
import pytest

from mstc import AttributionMap, MetricConfig, SynthSpec, generate, save_map
from mstc.harness import (
    AGGREGATE_COLUMNS,
    RESULT_COLUMNS,
    RunConfig,
    correlate,
    export_overlay,
    read_manifest,
    read_results_csv,
    run_batch,
)
from mstc.metric import compute_mstc_detail
from mstc.synth import reference_specs


@pytest.fixture()
def fixture_maps(tmp_path):
    paths = []
    for name, spec in reference_specs().items():
        small = SynthSpec(spec.kind, 48, 48, spec.params, spec.seed)
        if name == "multi_blob":
            small = SynthSpec("multi_blob", 48, 48, {"centers": [(14, 14), (34, 34)], "sigma": 4.0}, spec.seed)
        p = tmp_path / f"{name}.npy"
        save_map(generate(small), p)
        paths.append((p, name))
    return paths


def test_run_batch_counting_contract(fixture_maps, tmp_path):
    out = tmp_path / "out"
    config = RunConfig(inputs=fixture_maps, metric=MetricConfig(k=8, percentile=80), out_dir=out)
    result = run_batch(config)
    assert len(result.rows) == 3
    assert len(result.aggregates) == 1
    assert not result.any_failed
    results_csv = read_results_csv(out / "results.csv")
    assert len(results_csv) == 3
    agg_lines = (out / "aggregates.csv").read_text().splitlines()
    assert agg_lines[0] == ",".join(AGGREGATE_COLUMNS)
    assert len(agg_lines) == 2


def test_run_batch_error_column_and_flag(tmp_path):
    good = tmp_path / "good.npy"
    save_map(generate(SynthSpec("uniform_noise", 16, 16, seed=1)), good)
    missing = tmp_path / "missing.npy"
    config = RunConfig(
        inputs=[(good, "good"), (missing, "missing")],
        metric=MetricConfig(k=4, percentile=80),
    )
    result = run_batch(config)
    assert result.any_failed
    errors = {row["label"]: row["error"] for row in result.rows}
    assert errors["good"] == ""
    assert errors["missing"] == "FileNotFound"
    agg = result.aggregates[0]
    assert agg["n_samples"] == 2 and agg["n_failed"] == 1


def test_k_sweep_component_monotone(fixture_maps, tmp_path):
    blob = [entry for entry in fixture_maps if entry[1] == "multi_blob"]
    config = RunConfig(
        inputs=blob,
        metric=MetricConfig(k=8, percentile=80, on_disconnect="escalate_k"),
        sweep_axis="k",
        sweep_values=(1, 2, 5, 10, 50, 300),
    )
    result = run_batch(config)
    comps = [int(r["components_before"]) for r in result.rows]
    assert all(a >= b for a, b in zip(comps, comps[1:]))
    scores = [float(r["mstc_scaled"]) for r in result.rows]
    first_connected = next(i for i, c in enumerate(comps) if c == 1)
    base = scores[first_connected]
    assert all(abs(s - base) / base < 1e-3 for s in scores[first_connected:])


def test_percentile_sweep_monotone_on_noise(tmp_path):
    noise = tmp_path / "noise.npy"
    save_map(generate(SynthSpec("uniform_noise", 64, 64, seed=13)), noise)
    config = RunConfig(
        inputs=[(noise, "noise")],
        metric=MetricConfig(k=16, on_disconnect="escalate_k"),
        sweep_axis="percentile",
        sweep_values=(10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0),
    )
    result = run_batch(config)
    qc = [float(r["q_cohesion"]) for r in result.rows]
    hull = [float(r["hull_area"]) for r in result.rows]
    assert all(a >= b for a, b in zip(qc, qc[1:]))
    assert all(a >= b for a, b in zip(hull, hull[1:]))


def test_resolution_sweep_resizes_before_scoring(tmp_path):
    blob = tmp_path / "blob.npy"
    save_map(generate(SynthSpec("gaussian_blob", 16, 16, {"sigma": 2.5, "center": (8, 8)})), blob)
    config = RunConfig(
        inputs=[(blob, "blob")],
        metric=MetricConfig(k=32, percentile=80, on_disconnect="escalate_k"),
        sweep_axis="resolution",
        sweep_values=(16, 32, 64),
    )
    result = run_batch(config)
    dims = [(int(r["height"]), int(r["width"])) for r in result.rows]
    assert dims == [(16, 16), (32, 32), (64, 64)]
    nodes = [int(r["n_nodes"]) for r in result.rows]
    assert nodes == [51, 205, 819]  # round(0.2 * side^2)


def test_workers_do_not_change_results(fixture_maps):
    metric = MetricConfig(k=8, percentile=80)
    serial = run_batch(RunConfig(inputs=fixture_maps, metric=metric, workers=1))
    threaded = run_batch(RunConfig(inputs=fixture_maps, metric=metric, workers=4))

    def strip_timing(rows):
        return [{k: v for k, v in r.items() if k != "seconds"} for r in rows]

    assert strip_timing(serial.rows) == strip_timing(threaded.rows)


def test_sweep_validation():
    with pytest.raises(ValueError):
        RunConfig(inputs=[], sweep_axis="k", sweep_values=())
    with pytest.raises(ValueError):
        RunConfig(inputs=[], sweep_axis="k", sweep_values=(5, 5))
    with pytest.raises(ValueError):
        RunConfig(inputs=[], sweep_axis="bogus")
    with pytest.raises(ValueError):
        RunConfig(inputs=[], sweep_values=(1, 2))


def test_manifest_parsing(tmp_path):
    (tmp_path / "a.npy").write_bytes(b"")
    manifest = tmp_path / "list.txt"
    manifest.write_text("# comment\na.npy,methodA\n\n/abs/b.npy\n")
    inputs = read_manifest(manifest)
    assert inputs[0] == (tmp_path / "a.npy", "methodA")
    assert str(inputs[1][0]) == "/abs/b.npy" and inputs[1][1] == "b"


def test_correlate_identical_and_two_rows():
    rows = [
        {"label": "a", "x": "1.0", "y": "1.0", "error": ""},
        {"label": "a", "x": "2.0", "y": "2.0", "error": ""},
        {"label": "a", "x": "3.0", "y": "3.0", "error": ""},
        {"label": "b", "x": "1.0", "y": "9.0", "error": ""},
        {"label": "b", "x": "4.0", "y": "2.0", "error": ""},
    ]
    table = correlate(rows, "x", "y", ["label"])
    assert table[0]["label"] == "a" and table[0]["r"] == 1.0
    assert table[1]["label"] == "b" and abs(table[1]["r"]) == 1.0  # two points


def test_correlate_zero_variance_noted():
    rows = [
        {"x": "1.0", "y": "2.0", "error": ""},
        {"x": "1.0", "y": "3.0", "error": ""},
    ]
    table = correlate(rows, "x", "y", [])
    assert table[0]["r"] == "" and table[0]["note"] == "zero-variance"


def test_correlation_sign_on_blob_to_noise_family(tmp_path):
    # map family traversing concentrated -> diffuse: compactness falls while
    # entropy rises and gini falls, so r(mstc, entropy) < 0 < r(mstc, gini)
    from mstc import complexity_entropy, compute_mstc, sparseness_gini

    blob = generate(SynthSpec("gaussian_blob", 32, 32, {"sigma": 4.0})).values
    noise = generate(SynthSpec("uniform_noise", 32, 32, seed=3)).values
    cfg = MetricConfig(k=8, percentile=80, on_disconnect="escalate_k")
    scores, ents, ginis = [], [], []
    for t in np.linspace(0.0, 1.0, 9):
        grid = (1 - t) * blob + t * noise
        scores.append(compute_mstc(AttributionMap(grid), cfg).mstc_scaled)
        ents.append(complexity_entropy(grid))
        ginis.append(sparseness_gini(grid))
    from mstc import pearson

    assert pearson(scores, ents) < 0
    assert pearson(scores, ginis) > 0


def test_export_overlay_deterministic(tmp_path):
    amap = generate(SynthSpec("gaussian_blob", 24, 24, {"sigma": 3.0}))
    artifacts = compute_mstc_detail(amap, MetricConfig(k=4, percentile=90))
    first = export_overlay(artifacts, tmp_path / "a", "sample")
    second = export_overlay(artifacts, tmp_path / "b", "sample")
    for kind in first:
        assert first[kind].read_bytes() == second[kind].read_bytes()
    dot = first["dot"].read_text()
    assert dot.count("--") == artifacts.tree.n_edges
    points = first["points"].read_text().splitlines()
    assert points[0] == "row,col" and len(points) == len(artifacts.points) + 1


def test_export_overlay_two_node_fixture(tmp_path):
    amap = AttributionMap([[5.0, 4.0], [1.0, 0.0]])
    artifacts = compute_mstc_detail(amap, MetricConfig(k=1, percentile=50))
    paths = export_overlay(artifacts, tmp_path, "two")
    dot = paths["dot"].read_text()
    assert dot.count("pos=") == 2 and dot.count("--") == 1


def test_result_columns_echo_config(fixture_maps):
    result = run_batch(RunConfig(inputs=fixture_maps[:1], metric=MetricConfig(k=8, percentile=80)))
    row = result.rows[0]
    assert set(RESULT_COLUMNS) == set(row.keys())
    assert row["k"] == 8 and row["percentile"] == 80.0
    assert row["scale_mode"] == "diag_x100"
