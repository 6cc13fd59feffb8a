"""Deterministic spectral regularity test.

Decides, for a matrix A with bounded entries and row/column L2 norms at
most sqrt(n), either that every singular value is at most eps * n, or
produces a witness rectangle (S, T) whose entry sum has absolute value at
least (eps**8 / 100) * n**2. The quantity driving the decision is

    b_k = sum_{i,j} m_ij * a_ik * a_jk * <a_i, a_j>,

the trace of (A A^T)^2 estimated along the sketch support: with the exact
sketch sum_k b_k equals the trace itself. A large b_k pins a column k whose
correlation profile c_l = <a^k, a^l> yields T as a sign class, and the row
sums over T yield S the same way.
"""

from dataclasses import dataclass

import numpy as np

from cutdecomp import _kernels
from cutdecomp.core import as_matrix, norms, rect_sum
from cutdecomp.errors import InputError, SketchTooWeakError
from cutdecomp.expander import ExpanderSketch, is_certified

# relative slack when validating norm preconditions (guards fp creep only)
NORM_SLACK = 1e-9


def witness_floor(eps) -> float:
    """Guaranteed witness discrepancy as a fraction of n**2."""
    return eps**8 / 100.0


@dataclass(frozen=True)
class Regular:
    """All singular values are at most eps * n (guaranteed when certified)."""

    certified: bool


@dataclass(frozen=True, eq=False)
class Witness:
    """A rectangle S x T with sign * rect_sum(A, S, T) = discrepancy > 0."""

    S: np.ndarray
    T: np.ndarray
    sign: int
    discrepancy: float


class EdgeProducts:
    """Row scalar products along the sketch support.

    For the exact sketch this is the full Gram matrix A A^T; otherwise one
    value per stored pair, aligned with the sketch's pair arrays.
    """

    def __init__(self, exact, gram=None, s=None, sketch=None):
        self.exact = exact
        self.gram = gram
        self.s = s
        self._sketch = sketch

    def value(self, i, j):
        if self.exact:
            return float(self.gram[i, j])
        a, b = (i, j) if i <= j else (j, i)
        hit = np.flatnonzero((self._sketch.pairs_i == a) & (self._sketch.pairs_j == b))
        if not hit.size:
            raise InputError(f"pair ({i}, {j}) is not on the sketch support")
        return float(self.s[hit[0]])


def edge_products(A, sketch: ExpanderSketch) -> EdgeProducts:
    """s_ij = <a_i, a_j> for every stored pair (loops give row norms)."""
    A = as_matrix(A)
    if sketch.n != A.shape[0]:
        raise InputError(f"sketch is for n={sketch.n}, matrix has n={A.shape[0]}")
    if sketch.exact:
        return EdgeProducts(exact=True, gram=A @ A.T)
    s = _kernels.pair_dots(A, sketch.pairs_i, sketch.pairs_j)
    return EdgeProducts(exact=False, s=s, sketch=sketch)


def column_scores(A, sketch: ExpanderSketch, products: EdgeProducts) -> np.ndarray:
    """b_k summed over ordered pairs: stored off-diagonal pairs count twice."""
    A = as_matrix(A)
    if sketch.exact:
        return np.einsum("ik,ik->k", A, products.gram @ A)
    w = sketch.mult * products.s
    w = np.where(sketch.pairs_i != sketch.pairs_j, 2.0 * w, w)
    return _kernels.pair_column_scores(A, sketch.pairs_i, sketch.pairs_j, w)


def _sign_class(values):
    """Indices of the sign class with the larger absolute sum (ties: positive)."""
    pos = values > 0.0
    neg = values < 0.0
    pos_sum = float(values[pos].sum())
    neg_sum = float(values[neg].sum())
    if pos_sum >= -neg_sum:
        return np.flatnonzero(pos).astype(np.int64)
    return np.flatnonzero(neg).astype(np.int64)


def singular_test(A, eps, sketch: ExpanderSketch, C=1.0):
    """Regularity verdict for A, or a verified witness rectangle.

    Preconditions: entries bounded by C in absolute value and every row and
    column squared L2 norm at most n (validated with a 1e-9 relative slack).
    The verdict is certified when the sketch error meets the (C, eps)
    requirement; a certified Regular means every singular value is at most
    eps * n, and any witness is recomputed directly before being returned.
    With an uncertified sketch a failed witness recheck raises
    SketchTooWeakError instead of returning a bogus rectangle.
    """
    A = as_matrix(A)
    n = A.shape[0]
    if eps <= 0:
        raise InputError("eps must be positive")
    if sketch.n != n:
        raise InputError(f"sketch is for n={sketch.n}, matrix has n={n}")
    nm = norms(A)
    if nm.max_abs > C * (1.0 + NORM_SLACK):
        raise InputError(f"entry bound violated: max |a| = {nm.max_abs} > C = {C}")
    limit = n * (1.0 + NORM_SLACK)
    if nm.row_l2_sq.max() > limit or nm.col_l2_sq.max() > limit:
        raise InputError("a row or column has squared L2 norm above n")

    certified = is_certified(sketch, C, eps)
    products = edge_products(A, sketch)
    b = column_scores(A, sketch, products)
    threshold = (2.0 / 3.0) * eps**4 * sketch.d * n * n
    over = np.flatnonzero(b > threshold)
    if not over.size:
        return Regular(certified=certified)

    k = int(over[0])
    c = A.T @ A[:, k]
    T = _sign_class(c)
    d_T = A[:, T].sum(axis=1) if T.size else np.zeros(n)
    S = _sign_class(d_T)

    value = rect_sum(A, S, T)
    floor = witness_floor(eps) * n * n
    if abs(value) >= floor:
        sign = 1 if value > 0 else -1
        return Witness(S=S, T=T, sign=sign, discrepancy=abs(value))
    if certified:
        raise AssertionError(
            "certified witness fell below the guaranteed floor; this is a bug"
        )
    raise SketchTooWeakError(
        f"witness rectangle carries {abs(value):.6g} < required {floor:.6g}; "
        "increase the sketch degree or use the certified sketch"
    )
