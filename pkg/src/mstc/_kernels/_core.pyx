# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False, language_level=3
"""Compiled kernels: grid-bucketed exact kNN search, Kruskal accept loop,
and union-find component labels.

Results are contractually identical to `_fallback`: exact Euclidean
neighbors with (squared distance, row, col) tie order via the packed key
d2 * n + lexrank, and identical edge acceptance order for the tree.
"""

import math

import numpy as np

cimport numpy as cnp
from libc.stdlib cimport free, malloc

cnp.import_array()

BACKEND = "compiled"

ctypedef cnp.uint64_t u64
ctypedef cnp.int64_t i64
ctypedef cnp.int32_t i32


cdef inline void _heap_up(u64* hk, i32* hi, int i) noexcept nogil:
    cdef int p
    cdef u64 tk
    cdef i32 ti
    while i > 0:
        p = (i - 1) >> 1
        if hk[p] >= hk[i]:
            break
        tk = hk[p]; hk[p] = hk[i]; hk[i] = tk
        ti = hi[p]; hi[p] = hi[i]; hi[i] = ti
        i = p


cdef inline void _heap_down(u64* hk, i32* hi, int size) noexcept nogil:
    cdef int i = 0, child
    cdef u64 tk
    cdef i32 ti
    while True:
        child = 2 * i + 1
        if child >= size:
            break
        if child + 1 < size and hk[child + 1] > hk[child]:
            child += 1
        if hk[i] >= hk[child]:
            break
        tk = hk[i]; hk[i] = hk[child]; hk[child] = tk
        ti = hi[i]; hi[i] = hi[child]; hi[child] = ti
        i = child


def knn_neighbors(rows_in, cols_in, int k):
    """Exact kNN indices, (n, min(k, n-1)) int32; see the fallback docstring."""
    rows = np.ascontiguousarray(rows_in, dtype=np.int64)
    cols = np.ascontiguousarray(cols_in, dtype=np.int64)
    cdef Py_ssize_t n = rows.shape[0]
    cdef int k_eff = min(k, n - 1)
    out = np.empty((n, max(k_eff, 0)), dtype=np.int32)
    if k_eff <= 0:
        return out

    cdef i64 rmin = int(rows.min()), rmax = int(rows.max())
    cdef i64 cmin = int(cols.min()), cmax = int(cols.max())
    cdef i64 span_r = rmax - rmin + 1, span_c = cmax - cmin + 1
    max_d2 = (span_r - 1) ** 2 + (span_c - 1) ** 2
    if (max_d2 + 1) * (n + 1) >= 2**62:
        raise OverflowError("point extent too large for packed-key search")

    lex = np.lexsort((cols, rows))
    rank = np.empty(n, dtype=np.int64)
    rank[lex] = np.arange(n, dtype=np.int64)

    # same sizing heuristic as the fallback: rings reach k within ~2 hops
    cdef i64 s = max(1, int(round(0.5 * math.sqrt(k_eff * span_r * span_c / n))))
    while ((span_r + s - 1) // s) * ((span_c + s - 1) // s) > 4 * n + 64:
        s *= 2
    cdef i64 ncr = (span_r + s - 1) // s
    cdef i64 ncc = (span_c + s - 1) // s

    cell = ((rows - rmin) // s) * ncc + (cols - cmin) // s
    order = np.argsort(cell, kind="stable").astype(np.int64)
    bounds = np.searchsorted(cell[order], np.arange(ncr * ncc + 1)).astype(np.int64)

    cdef i64[::1] r_v = rows
    cdef i64[::1] c_v = cols
    cdef i64[::1] rank_v = rank
    cdef i64[::1] order_v = order
    cdef i64[::1] bounds_v = bounds
    cdef i32[:, ::1] out_v = out

    cdef u64* hk = <u64*> malloc(k_eff * sizeof(u64))
    cdef i32* hi = <i32*> malloc(k_eff * sizeof(i32))
    if hk == NULL or hi == NULL:
        free(hk); free(hi)
        raise MemoryError()

    cdef Py_ssize_t q, t
    cdef i64 qr, qc, qcr, qcc, ring, max_ring, cr, cc, b, idx, dr, dc, d2, nxt
    cdef i64 c_lo, c_hi
    cdef u64 key, n_u = <u64> n
    cdef int hsize, m_out
    cdef bint full

    with nogil:
        for q in range(n):
            qr = r_v[q]; qc = c_v[q]
            qcr = (qr - rmin) // s
            qcc = (qc - cmin) // s
            max_ring = qcr
            if ncr - 1 - qcr > max_ring: max_ring = ncr - 1 - qcr
            if qcc > max_ring: max_ring = qcc
            if ncc - 1 - qcc > max_ring: max_ring = ncc - 1 - qcc
            hsize = 0
            ring = 0
            while True:
                # visit every cell at Chebyshev cell-distance `ring`
                cr = qcr - ring
                if cr >= 0:
                    c_lo = qcc - ring
                    if c_lo < 0: c_lo = 0
                    c_hi = qcc + ring
                    if c_hi > ncc - 1: c_hi = ncc - 1
                    for cc in range(c_lo, c_hi + 1):
                        b = cr * ncc + cc
                        for t in range(bounds_v[b], bounds_v[b + 1]):
                            idx = order_v[t]
                            if idx == q: continue
                            dr = r_v[idx] - qr; dc = c_v[idx] - qc
                            d2 = dr * dr + dc * dc
                            key = (<u64> d2) * n_u + (<u64> rank_v[idx])
                            if hsize < k_eff:
                                hk[hsize] = key; hi[hsize] = <i32> idx
                                hsize += 1
                                _heap_up(hk, hi, hsize - 1)
                            elif key < hk[0]:
                                hk[0] = key; hi[0] = <i32> idx
                                _heap_down(hk, hi, hsize)
                if ring > 0:
                    cr = qcr + ring
                    if cr <= ncr - 1:
                        c_lo = qcc - ring
                        if c_lo < 0: c_lo = 0
                        c_hi = qcc + ring
                        if c_hi > ncc - 1: c_hi = ncc - 1
                        for cc in range(c_lo, c_hi + 1):
                            b = cr * ncc + cc
                            for t in range(bounds_v[b], bounds_v[b + 1]):
                                idx = order_v[t]
                                if idx == q: continue
                                dr = r_v[idx] - qr; dc = c_v[idx] - qc
                                d2 = dr * dr + dc * dc
                                key = (<u64> d2) * n_u + (<u64> rank_v[idx])
                                if hsize < k_eff:
                                    hk[hsize] = key; hi[hsize] = <i32> idx
                                    hsize += 1
                                    _heap_up(hk, hi, hsize - 1)
                                elif key < hk[0]:
                                    hk[0] = key; hi[0] = <i32> idx
                                    _heap_down(hk, hi, hsize)
                    for cr in range(qcr - ring + 1, qcr + ring):
                        if cr < 0 or cr > ncr - 1: continue
                        cc = qcc - ring
                        if cc >= 0:
                            b = cr * ncc + cc
                            for t in range(bounds_v[b], bounds_v[b + 1]):
                                idx = order_v[t]
                                if idx == q: continue
                                dr = r_v[idx] - qr; dc = c_v[idx] - qc
                                d2 = dr * dr + dc * dc
                                key = (<u64> d2) * n_u + (<u64> rank_v[idx])
                                if hsize < k_eff:
                                    hk[hsize] = key; hi[hsize] = <i32> idx
                                    hsize += 1
                                    _heap_up(hk, hi, hsize - 1)
                                elif key < hk[0]:
                                    hk[0] = key; hi[0] = <i32> idx
                                    _heap_down(hk, hi, hsize)
                        cc = qcc + ring
                        if cc <= ncc - 1:
                            b = cr * ncc + cc
                            for t in range(bounds_v[b], bounds_v[b + 1]):
                                idx = order_v[t]
                                if idx == q: continue
                                dr = r_v[idx] - qr; dc = c_v[idx] - qc
                                d2 = dr * dr + dc * dc
                                key = (<u64> d2) * n_u + (<u64> rank_v[idx])
                                if hsize < k_eff:
                                    hk[hsize] = key; hi[hsize] = <i32> idx
                                    hsize += 1
                                    _heap_up(hk, hi, hsize - 1)
                                elif key < hk[0]:
                                    hk[0] = key; hi[0] = <i32> idx
                                    _heap_down(hk, hi, hsize)
                if ring >= max_ring:
                    break
                if hsize == k_eff:
                    # ring+1 points differ by >= ring*s+1 in some coordinate
                    nxt = ring * s + 1
                    if (<u64> (nxt * nxt)) * n_u > hk[0]:
                        break
                ring += 1
            # heap-sort extraction: ascending neighbor order
            m_out = hsize
            while m_out > 0:
                out_v[q, m_out - 1] = hi[0]
                m_out -= 1
                hk[0] = hk[m_out]; hi[0] = hi[m_out]
                _heap_down(hk, hi, m_out)

    free(hk)
    free(hi)
    return out


cdef inline i64 _uf_find(i64* parent, i64 a) noexcept nogil:
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


def kruskal(src_in, dst_in, weight_in, Py_ssize_t n):
    """Accept loop over edges sorted by (weight, i, j); see the fallback."""
    src = np.ascontiguousarray(src_in, dtype=np.int32)
    dst = np.ascontiguousarray(dst_in, dtype=np.int32)
    weight = np.ascontiguousarray(weight_in, dtype=np.float64)
    cdef i32[::1] src_v = src
    cdef i32[::1] dst_v = dst
    cdef double[::1] w_v = weight
    cdef Py_ssize_t m = src.shape[0]
    accepted = np.empty(max(n - 1, 0), dtype=np.int64)
    cdef i64[::1] acc_v = accepted
    cdef i64* parent = <i64*> malloc(n * sizeof(i64))
    if parent == NULL:
        raise MemoryError()
    cdef Py_ssize_t pos
    cdef i64 i, ra, rb, cnt = 0, target = n - 1
    cdef double total = 0.0
    with nogil:
        for i in range(n):
            parent[i] = i
        for pos in range(m):
            ra = _uf_find(parent, src_v[pos])
            rb = _uf_find(parent, dst_v[pos])
            if ra != rb:
                parent[rb] = ra
                total += w_v[pos]
                acc_v[cnt] = pos
                cnt += 1
                if cnt == target:
                    break
    free(parent)
    return accepted[:cnt].copy(), total


def component_labels(Py_ssize_t n, src_in, dst_in):
    """Connected-component label per node (labels arbitrary; caller canonicalizes)."""
    src = np.ascontiguousarray(src_in, dtype=np.int32)
    dst = np.ascontiguousarray(dst_in, dtype=np.int32)
    cdef i32[::1] src_v = src
    cdef i32[::1] dst_v = dst
    cdef Py_ssize_t m = src.shape[0]
    labels = np.empty(n, dtype=np.int64)
    cdef i64[::1] lab_v = labels
    cdef i64* parent = <i64*> malloc(n * sizeof(i64))
    if parent == NULL:
        raise MemoryError()
    cdef Py_ssize_t pos
    cdef i64 i, ra, rb
    with nogil:
        for i in range(n):
            parent[i] = i
        for pos in range(m):
            ra = _uf_find(parent, src_v[pos])
            rb = _uf_find(parent, dst_v[pos])
            if ra != rb:
                parent[rb] = ra
        for i in range(n):
            lab_v[i] = _uf_find(parent, i)
    free(parent)
    return labels
