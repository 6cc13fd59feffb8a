# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: sequential loops over pair lists, the rectangle
trimming pass, exhaustive cut-norm enumeration, and partite assignment
enumeration. Pure-numpy equivalents live in ``_pykernels.py``."""

import numpy as np


def pair_dots(A, I, J):
    """Row scalar products <A[i,:], A[j,:]> for each listed pair."""
    cdef const double[:, ::1] a = np.ascontiguousarray(A, dtype=np.float64)
    cdef const long long[::1] ii = np.ascontiguousarray(I, dtype=np.int64)
    cdef const long long[::1] jj = np.ascontiguousarray(J, dtype=np.int64)
    cdef Py_ssize_t npairs = ii.shape[0]
    cdef Py_ssize_t n = a.shape[1]
    out = np.empty(npairs, dtype=np.float64)
    cdef double[::1] s = out
    cdef Py_ssize_t p, k, i, j
    cdef double acc
    for p in range(npairs):
        i = ii[p]
        j = jj[p]
        acc = 0.0
        for k in range(n):
            acc += a[i, k] * a[j, k]
        s[p] = acc
    return out


def pair_column_scores(A, I, J, w):
    """b[k] = sum_p w[p] * A[I[p],k] * A[J[p],k]."""
    cdef const double[:, ::1] a = np.ascontiguousarray(A, dtype=np.float64)
    cdef const long long[::1] ii = np.ascontiguousarray(I, dtype=np.int64)
    cdef const long long[::1] jj = np.ascontiguousarray(J, dtype=np.int64)
    cdef const double[::1] ww = np.ascontiguousarray(w, dtype=np.float64)
    cdef Py_ssize_t npairs = ii.shape[0]
    cdef Py_ssize_t n = a.shape[1]
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] b = out
    cdef Py_ssize_t p, k, i, j
    cdef double wp
    for p in range(npairs):
        i = ii[p]
        j = jj[p]
        wp = ww[p]
        for k in range(n):
            b[k] += wp * a[i, k] * a[j, k]
    return out


def trim_run(R, thr):
    """Greedy deletion of deficient rows/columns of a sign-adjusted rectangle.

    First active row with active sum below ``thr`` is removed (rows scanned
    before columns, ascending), sums updated incrementally, until every
    surviving line clears the threshold. Returns boolean keep-masks.
    """
    cdef const double[:, ::1] r = np.ascontiguousarray(R, dtype=np.float64)
    cdef Py_ssize_t nr = r.shape[0]
    cdef Py_ssize_t nc = r.shape[1]
    cdef double threshold = thr
    rows_out = np.ones(nr, dtype=bool)
    cols_out = np.ones(nc, dtype=bool)
    cdef unsigned char[::1] rows = rows_out.view(np.uint8)
    cdef unsigned char[::1] cols = cols_out.view(np.uint8)
    rs = np.asarray(R, dtype=np.float64).sum(axis=1)
    cs = np.asarray(R, dtype=np.float64).sum(axis=0)
    cdef double[::1] rsum = np.ascontiguousarray(rs)
    cdef double[::1] csum = np.ascontiguousarray(cs)
    cdef Py_ssize_t i, k
    cdef bint changed = True
    while changed:
        changed = False
        for i in range(nr):
            if rows[i] and rsum[i] < threshold:
                rows[i] = 0
                for k in range(nc):
                    csum[k] -= r[i, k]
                changed = True
                break
        if changed:
            continue
        for k in range(nc):
            if cols[k] and csum[k] < threshold:
                cols[k] = 0
                for i in range(nr):
                    rsum[i] -= r[i, k]
                changed = True
                break
    return rows_out, cols_out


def cutnorm_enum(A):
    """Exhaustive rectangle maximization over all row subsets (n <= 22).

    Gray-code walk with incremental column sums; the optimal column side for
    a fixed row subset is a sign class. Ties prefer the smaller row mask and
    the positive class. Returns (value, row_mask, col_mask).
    """
    cdef const double[:, ::1] a = np.ascontiguousarray(A, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t nc = a.shape[1]
    buf = np.zeros(nc, dtype=np.float64)
    cdef double[::1] colsum = buf
    cdef double best = 0.0
    cdef unsigned long long best_rows = 0
    cdef unsigned long long best_cols = 0
    cdef unsigned long long g, gray, new_gray, diff, tmask
    cdef Py_ssize_t bit, k
    cdef double pos, neg, val
    cdef int sign
    gray = 0
    for g in range(1, (<unsigned long long>1) << n):
        new_gray = g ^ (g >> 1)
        diff = new_gray ^ gray
        bit = 0
        while not (diff & ((<unsigned long long>1) << bit)):
            bit += 1
        if new_gray & ((<unsigned long long>1) << bit):
            for k in range(nc):
                colsum[k] += a[bit, k]
        else:
            for k in range(nc):
                colsum[k] -= a[bit, k]
        gray = new_gray
        pos = 0.0
        neg = 0.0
        for k in range(nc):
            if colsum[k] > 0.0:
                pos += colsum[k]
            elif colsum[k] < 0.0:
                neg += colsum[k]
        if pos >= -neg:
            val = pos
            sign = 1
        else:
            val = -neg
            sign = -1
        if val > best or (val == best and gray < best_rows):
            best = val
            best_rows = gray
            tmask = 0
            for k in range(nc):
                if (sign > 0 and colsum[k] > 0.0) or (sign < 0 and colsum[k] < 0.0):
                    tmask |= (<unsigned long long>1) << k
            best_cols = tmask
    return best, int(best_rows), int(best_cols)


def hom_star_sum(sizes, edges, blocks):
    """Sum over all part assignments of the product of edge block weights.

    Odometer enumeration in lexicographic order; every part must occur in at
    least one edge (the caller strips untouched parts).
    """
    cdef const long long[::1] sz = np.ascontiguousarray(sizes, dtype=np.int64)
    cdef Py_ssize_t k = sz.shape[0]
    cdef Py_ssize_t m = len(edges)
    e_arr = np.asarray(edges, dtype=np.int64).reshape(m, 2)
    cdef const long long[:, ::1] ed = np.ascontiguousarray(e_arr)
    flat_parts = []
    offs = np.empty(m, dtype=np.int64)
    ncols = np.empty(m, dtype=np.int64)
    cdef Py_ssize_t e
    pos = 0
    for e in range(m):
        blk = np.ascontiguousarray(blocks[e], dtype=np.float64)
        flat_parts.append(blk.ravel())
        offs[e] = pos
        ncols[e] = blk.shape[1]
        pos += blk.size
    cdef const double[::1] flat = np.concatenate(flat_parts) if m else np.empty(0)
    cdef const long long[::1] off = offs
    cdef const long long[::1] ncol = ncols
    counters = np.zeros(k, dtype=np.int64)
    cdef long long[::1] c = counters
    cdef double total = 0.0
    cdef double term
    cdef Py_ssize_t pos2, i
    for i in range(k):
        if sz[i] == 0:
            return 0.0
    while True:
        term = 1.0
        for e in range(m):
            term *= flat[off[e] + c[ed[e, 0]] * ncol[e] + c[ed[e, 1]]]
        total += term
        pos2 = k - 1
        while pos2 >= 0:
            c[pos2] += 1
            if c[pos2] < sz[pos2]:
                break
            c[pos2] = 0
            pos2 -= 1
        if pos2 < 0:
            break
    return total
