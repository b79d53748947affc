"""Pure-numpy kernel implementations.

Selected at import time when the compiled extension is unavailable.  Results
are required to be identical, element for element, to `_core`: both backends
implement exact nearest-neighbor search (grid bucketing is an acceleration
only) with squared-distance integer arithmetic and (d2, row, col) tie order.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "fallback"

_KEY_INF = np.int64(2**62)


def _cell_size(n: int, k_eff: int, span_r: int, span_c: int) -> int:
    # aim for rings that capture ~k neighbors within 1-2 expansions
    area = span_r * span_c
    s = max(1, int(round(0.5 * math.sqrt(k_eff * area / n))))
    while ((span_r + s - 1) // s) * ((span_c + s - 1) // s) > 4 * n + 64:
        s *= 2
    return s


def knn_neighbors(rows: np.ndarray, cols: np.ndarray, k: int) -> np.ndarray:
    """Exact k-nearest-neighbor indices for distinct lattice points.

    Returns an (n, min(k, n-1)) int32 array; row i holds the neighbor
    indices of point i ordered by ascending (squared distance, row, col).
    """
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    cols = np.ascontiguousarray(cols, dtype=np.int64)
    n = rows.shape[0]
    k_eff = min(k, n - 1)
    out = np.empty((n, max(k_eff, 0)), dtype=np.int32)
    if k_eff <= 0:
        return out

    rmin, rmax = int(rows.min()), int(rows.max())
    cmin, cmax = int(cols.min()), int(cols.max())
    span_r, span_c = rmax - rmin + 1, cmax - cmin + 1
    max_d2 = (span_r - 1) ** 2 + (span_c - 1) ** 2
    if (max_d2 + 1) * (n + 1) >= 2**62:
        raise OverflowError("point extent too large for packed-key search")

    # lexicographic (row, col) rank: the deterministic tie-break key
    lex = np.lexsort((cols, rows))
    rank = np.empty(n, dtype=np.int64)
    rank[lex] = np.arange(n, dtype=np.int64)

    s = _cell_size(n, k_eff, span_r, span_c)
    ncr = (span_r + s - 1) // s
    ncc = (span_c + s - 1) // s
    cell = ((rows - rmin) // s) * ncc + (cols - cmin) // s
    order = np.argsort(cell, kind="stable")
    cell_sorted = cell[order]
    bounds = np.searchsorted(cell_sorted, np.arange(ncr * ncc + 1))

    def ring_members(bcr: int, bcc: int, r: int) -> list[np.ndarray]:
        chunks = []

        def row_span(rr: int, c_lo: int, c_hi: int):
            if 0 <= rr < ncr:
                c_lo = max(c_lo, 0)
                c_hi = min(c_hi, ncc - 1)
                if c_lo <= c_hi:
                    lo = bounds[rr * ncc + c_lo]
                    hi = bounds[rr * ncc + c_hi + 1]
                    if hi > lo:
                        chunks.append(order[lo:hi])

        if r == 0:
            row_span(bcr, bcc, bcc)
            return chunks
        row_span(bcr - r, bcc - r, bcc + r)
        row_span(bcr + r, bcc - r, bcc + r)
        for rr in range(max(bcr - r + 1, 0), min(bcr + r - 1, ncr - 1) + 1):
            row_span(rr, bcc - r, bcc - r)
            row_span(rr, bcc + r, bcc + r)
        return chunks

    n64 = np.int64(n)
    for b in np.unique(cell_sorted):
        lo, hi = bounds[b], bounds[b + 1]
        q = order[lo:hi]
        qr = rows[q][:, None]
        qc = cols[q][:, None]
        bcr, bcc = divmod(int(b), ncc)
        max_ring = max(bcr, ncr - 1 - bcr, bcc, ncc - 1 - bcc)
        chunks: list[np.ndarray] = []
        count = 0
        key = cand = None
        r = 0
        while True:
            new = ring_members(bcr, bcc, r)
            if new:
                chunks.extend(new)
                count += sum(c.size for c in new)
            exhausted = r >= max_ring
            if count >= k_eff + 1 or exhausted:
                cand = np.concatenate(chunks)
                d2 = (qr - rows[cand]) ** 2 + (qc - cols[cand]) ** 2
                key = d2 * n64 + rank[cand]
                key[cand[None, :] == q[:, None]] = _KEY_INF
                if exhausted:
                    break
                kth = np.partition(key, k_eff - 1, axis=1)[:, k_eff - 1]
                # ring r+1 points are >= r*s+1 away in some coordinate
                if (kth < (np.int64(r * s + 1) ** 2) * n64).all():
                    break
            r += 1
        sel = np.argpartition(key, k_eff - 1, axis=1)[:, :k_eff]
        sel_key = np.take_along_axis(key, sel, axis=1)
        sel = np.take_along_axis(sel, np.argsort(sel_key, axis=1), axis=1)
        out[q] = cand[sel].astype(np.int32)
    return out


def kruskal(src: np.ndarray, dst: np.ndarray, weight: np.ndarray, n: int):
    """Greedy tree growth over edges already sorted by (weight, i, j).

    Returns (positions of accepted edges, total length). The caller detects
    disconnection from len(positions) < n - 1.
    """
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    src_l = src.tolist()
    dst_l = dst.tolist()
    w_l = weight.tolist()
    accepted: list[int] = []
    total = 0.0
    target = n - 1
    for pos in range(len(src_l)):
        ra = find(src_l[pos])
        rb = find(dst_l[pos])
        if ra != rb:
            parent[rb] = ra
            total += w_l[pos]
            accepted.append(pos)
            if len(accepted) == target:
                break
    return np.asarray(accepted, dtype=np.int64), total


def _multi_arange(starts: np.ndarray, stops: np.ndarray) -> np.ndarray:
    lengths = stops - starts
    total = int(lengths.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    reset = np.repeat(stops - np.cumsum(lengths), lengths)
    return np.arange(total, dtype=np.int64) + reset


def component_labels(n: int, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Connected-component label per node (labels arbitrary; caller canonicalizes)."""
    labels = np.full(n, -1, dtype=np.int64)
    if src.size == 0:
        return np.arange(n, dtype=np.int64)
    ends = np.concatenate([src, dst]).astype(np.int64)
    peers = np.concatenate([dst, src]).astype(np.int64)
    deg = np.bincount(ends, minlength=n)
    offsets = np.concatenate([[0], np.cumsum(deg)])
    adj = peers[np.argsort(ends, kind="stable")]
    comp = 0
    for seed in range(n):
        if labels[seed] != -1:
            continue
        labels[seed] = comp
        frontier = np.array([seed], dtype=np.int64)
        while frontier.size:
            nxt = adj[_multi_arange(offsets[frontier], offsets[frontier + 1])]
            nxt = nxt[labels[nxt] == -1]
            if nxt.size:
                nxt = np.unique(nxt)
                labels[nxt] = comp
            frontier = nxt
        comp += 1
    return labels
