"""Pure-numpy implementations of the hot kernels.

Semantics mirror the compiled backend in ``_ckernels.pyx``; this module is
selected at import time when the extension is not built. Floating-point
reduction order differs from the compiled loops, so cross-backend results
agree only to rounding, while each backend on its own is deterministic.
"""

import numpy as np

# chunk size for pair gathers, keeps (pairs x n) temporaries small
_BLOCK = 4096


def pair_dots(A, I, J):
    """Row scalar products <A[i,:], A[j,:]> for each listed pair."""
    npairs = I.shape[0]
    s = np.empty(npairs, dtype=np.float64)
    for lo in range(0, npairs, _BLOCK):
        hi = min(lo + _BLOCK, npairs)
        s[lo:hi] = np.einsum("pk,pk->p", A[I[lo:hi]], A[J[lo:hi]])
    return s


def pair_column_scores(A, I, J, w):
    """b[k] = sum_p w[p] * A[I[p],k] * A[J[p],k]."""
    b = np.zeros(A.shape[1], dtype=np.float64)
    for lo in range(0, I.shape[0], _BLOCK):
        hi = min(lo + _BLOCK, I.shape[0])
        b += np.einsum("p,pk,pk->k", w[lo:hi], A[I[lo:hi]], A[J[lo:hi]])
    return b


def trim_run(R, thr):
    """Greedy deletion of deficient rows/columns of a sign-adjusted rectangle.

    Repeatedly removes the first active row whose active sum is below ``thr``
    (rows scanned before columns, both in ascending order) and updates the
    complementary sums incrementally. Returns boolean keep-masks.
    """
    nr, nc = R.shape
    rows = np.ones(nr, dtype=bool)
    cols = np.ones(nc, dtype=bool)
    rsum = R.sum(axis=1)
    csum = R.sum(axis=0)
    while True:
        bad = np.flatnonzero(rows & (rsum < thr))
        if bad.size:
            i = bad[0]
            rows[i] = False
            csum = csum - R[i, :]
            continue
        bad = np.flatnonzero(cols & (csum < thr))
        if bad.size:
            k = bad[0]
            cols[k] = False
            rsum = rsum - R[:, k]
            continue
        break
    return rows, cols


def cutnorm_enum(A):
    """Exhaustive rectangle maximization over all row subsets.

    Gray-code walk over the 2**n row subsets with an incremental column-sum
    vector; for each subset the optimal column side is a sign class. Returns
    (value, row_mask, col_mask) with ties broken toward the smaller row mask
    and toward the positive sign class.
    """
    n, nc = A.shape
    colsum = np.zeros(nc, dtype=np.float64)
    best = 0.0
    best_rows = 0
    best_cols = 0
    gray = 0
    for g in range(1, 1 << n):
        new_gray = g ^ (g >> 1)
        bit = (new_gray ^ gray).bit_length() - 1
        if new_gray & (1 << bit):
            colsum = colsum + A[bit, :]
        else:
            colsum = colsum - A[bit, :]
        gray = new_gray
        pos = float(colsum[colsum > 0.0].sum())
        neg = float(colsum[colsum < 0.0].sum())
        if pos >= -neg:
            val, sign = pos, 1
        else:
            val, sign = -neg, -1
        if val > best or (val == best and gray < best_rows):
            best = val
            best_rows = gray
            if sign > 0:
                idx = np.flatnonzero(colsum > 0.0)
            else:
                idx = np.flatnonzero(colsum < 0.0)
            best_cols = 0
            for k in idx:
                best_cols |= 1 << int(k)
    return best, best_rows, best_cols


def hom_star_sum(sizes, edges, blocks):
    """Sum over all part assignments of the product of edge block weights.

    ``blocks[e]`` has shape (sizes[edges[e][0]], sizes[edges[e][1]]). Every
    part index must occur in at least one edge; the caller handles untouched
    parts. Evaluated as a full einsum contraction in C order, which
    enumerates assignments lexicographically.
    """
    k = len(sizes)
    if k > 26:
        raise NotImplementedError("python backend supports at most 26 parts")
    letters = "abcdefghijklmnopqrstuvwxyz"
    subs = ",".join(letters[i] + letters[j] for i, j in edges) + "->"
    return float(np.einsum(subs, *blocks, optimize=False))
