"""Benchmark the compiled kernels against the numpy fallback.

Times the three hot kernels (kNN search, tree accept loop, component
labels) and the end-to-end scoring pipeline on the flagship workload
(224x224, 80th percentile, k=500), verifying along the way that both
backends produce identical results.

Usage: python benchmarks/bench_kernels.py [--size 224] [--k 500] [--repeat 3]
"""

import argparse
import time

import numpy as np

import mstc
from mstc import _kernels
from mstc._kernels import _fallback

try:
    from mstc._kernels import _core
except ImportError:
    _core = None


def timed(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_kernels(rows, cols, k, repeat):
    backends = {"fallback": _fallback}
    if _core is not None:
        backends["compiled"] = _core
    n = len(rows)

    knn = {}
    for name, mod in backends.items():
        knn[name] = timed(lambda m=mod: m.knn_neighbors(rows, cols, k), repeat)
    if len(knn) == 2:
        assert (knn["compiled"][1] == knn["fallback"][1]).all(), "kNN results diverged"

    nb = knn["fallback"][1]
    k_eff = nb.shape[1]
    a = np.repeat(np.arange(n, dtype=np.int64), k_eff)
    b = nb.ravel().astype(np.int64)
    packed = np.unique(np.minimum(a, b) * n + np.maximum(a, b))
    iu = (packed // n).astype(np.int32)
    jv = (packed % n).astype(np.int32)
    d2 = (rows[iu] - rows[jv]) ** 2 + (cols[iu] - cols[jv]) ** 2
    w = np.sqrt(d2.astype(np.float64))
    order = np.lexsort((jv, iu, w))
    args = (iu[order].copy(), jv[order].copy(), w[order].copy(), n)

    kruskal = {}
    for name, mod in backends.items():
        kruskal[name] = timed(lambda m=mod: m.kruskal(*args), repeat)
    if len(kruskal) == 2:
        pa, ta = kruskal["fallback"][1]
        pb, tb = kruskal["compiled"][1]
        assert (pa == pb).all() and ta == tb, "tree results diverged"

    comps = {}
    for name, mod in backends.items():
        comps[name] = timed(lambda m=mod: m.component_labels(n, iu, jv), repeat)

    print(f"\nkernels on n={n}, k={k} ({len(iu)} undirected edges):")
    header = f"{'kernel':<12}" + "".join(f"{name:>12}" for name in backends)
    print(header)
    for label, table in (("knn", knn), ("kruskal", kruskal), ("components", comps)):
        row = f"{label:<12}"
        for name in backends:
            row += f"{table[name][0] * 1e3:>10.1f}ms"
        print(row)
    if len(backends) == 2:
        speedup = knn["fallback"][0] / knn["compiled"][0]
        print(f"kNN speedup: {speedup:.1f}x")


def bench_pipeline(amap, k, repeat):
    cfg = mstc.MetricConfig(k=k, percentile=80.0)
    originals = (_kernels.knn_neighbors, _kernels.kruskal, _kernels.component_labels)
    results = {}
    try:
        for name, mod in (("fallback", _fallback), ("compiled", _core)):
            if mod is None:
                continue
            _kernels.knn_neighbors = mod.knn_neighbors
            _kernels.kruskal = mod.kruskal
            _kernels.component_labels = mod.component_labels
            results[name] = timed(lambda: mstc.compute_mstc(amap, cfg), repeat)
    finally:
        _kernels.knn_neighbors, _kernels.kruskal, _kernels.component_labels = originals

    print(f"\nend-to-end compute_mstc ({amap.height}x{amap.width}, k={k}):")
    for name, (secs, rep) in results.items():
        print(f"{name:<12}{secs:>10.2f}s   mstc_scaled={rep.mstc_scaled:.6f}")
    if len(results) == 2:
        assert results["fallback"][1] == results["compiled"][1], "pipeline reports diverged"
        print(f"pipeline speedup: {results['fallback'][0] / results['compiled'][0]:.1f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=224)
    parser.add_argument("--k", type=int, default=500)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    print(f"selected backend: {_kernels.BACKEND}")
    if _core is None:
        print("compiled extension not built; timing the fallback only")

    amap = mstc.generate(mstc.SynthSpec("uniform_noise", args.size, args.size, seed=7))
    pts = mstc.percentile_threshold(mstc.absolute(amap), 80.0)
    rows = np.ascontiguousarray(pts.points[:, 0])
    cols = np.ascontiguousarray(pts.points[:, 1])

    bench_kernels(rows, cols, args.k, args.repeat)
    bench_pipeline(amap, args.k, args.repeat)


if __name__ == "__main__":
    main()
