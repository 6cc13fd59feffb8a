"""Independent brute-force verifiers.

Everything here exists to check the main algorithms from the outside:
power iteration for spectral norms, exhaustive cut-norm maximization,
partition discrepancy, and exact homomorphism counts. None of these are
called on the certified paths of the decomposition or counting code.
"""

import math
from typing import NamedTuple

import numpy as np

from cutdecomp import _kernels
from cutdecomp.core import PatternGraph, WeightedGraph, as_matrix
from cutdecomp.errors import BudgetError, InputError

# exhaustive enumeration is 2**n; beyond this it stops being a desk oracle
CUT_NORM_MAX_N = 22

DEFAULT_ENUM_BUDGET = 100_000_000


class PowerIterationResult(NamedTuple):
    value: float
    converged: bool
    iterations: int


def top_singular(A, iters=200, tol=1e-9) -> PowerIterationResult:
    """Lower bound on the largest singular value by power iteration.

    Iterates v <- A^T A v from the fixed start v_i = 1 + i/n (non-uniform so
    it is never orthogonal to the all-ones direction by accident). The
    reported value is ||A v|| for the final unit v, which never exceeds the
    true norm and is nondecreasing in the iteration count.
    """
    A = as_matrix(A)
    if iters < 1:
        raise InputError("iters must be at least 1")
    n = A.shape[0]
    v = 1.0 + np.arange(n) / n
    v /= math.sqrt(float(v @ v))
    prev = 0.0
    value = 0.0
    for it in range(1, iters + 1):
        u = A @ v
        value = math.sqrt(float(u @ u))
        if value == 0.0:
            return PowerIterationResult(0.0, True, it)
        w = A.T @ u
        wn = math.sqrt(float(w @ w))
        if wn == 0.0:
            return PowerIterationResult(value, True, it)
        v = w / wn
        if it > 1 and abs(value - prev) <= tol * value:
            return PowerIterationResult(value, True, it)
        prev = value
    return PowerIterationResult(value, False, iters)


def exact_cut_norm(A):
    """Exhaustive max over rectangles of |sum of entries|, with an argmax.

    Enumerates all 2**n row subsets; the optimal column side for a fixed row
    subset is a sign class of the column sums. Returns (value, S, T).
    """
    A = as_matrix(A)
    n = A.shape[0]
    if n > CUT_NORM_MAX_N:
        raise BudgetError(f"exact cut norm is limited to n <= {CUT_NORM_MAX_N}, got {n}")
    value, row_mask, col_mask = _kernels.cutnorm_enum(A)
    S = np.flatnonzero([(row_mask >> i) & 1 for i in range(n)]).astype(np.int64)
    T = np.flatnonzero([(col_mask >> k) & 1 for k in range(n)]).astype(np.int64)
    return float(value), S, T


def fk_discrepancy(g: WeightedGraph, partition, normalized=False):
    """Worst rectangle discrepancy of a partition's density approximation.

    Exhaustive cut norm of b_uv = w_uv - d(part(u), part(v)); with
    ``normalized`` the value is divided by n**2.
    """
    n = g.n
    part_of = np.asarray(partition.part_of, dtype=np.int64)
    if part_of.shape != (n,):
        raise InputError("partition does not match the graph")
    b = g.weights - partition.densities[np.ix_(part_of, part_of)]
    value, _, _ = exact_cut_norm(b)
    return value / (n * n) if normalized else value


def _as_cycle(h: PatternGraph):
    """Vertex order if h is a single cycle, else None."""
    k = h.k
    if k < 3 or len(h.edges) != k:
        return None
    adj = {i: [] for i in range(k)}
    for u, v in h.edges:
        adj[u].append(v)
        adj[v].append(u)
    if any(len(nb) != 2 for nb in adj.values()):
        return None
    order = [0, adj[0][0]]
    while len(order) < k:
        a, b = adj[order[-1]]
        nxt = b if a == order[-2] else a
        if nxt == 0:
            return None
        order.append(nxt)
    return order


def exact_hom(h: PatternGraph, g: WeightedGraph, budget=DEFAULT_ENUM_BUDGET,
              use_closed_form=True):
    """Exact homomorphism count of the pattern into the weighted graph.

    Cycles (including the triangle) use the closed form trace(A**k); all
    other patterns are enumerated directly over the n**k vertex maps, which
    must fit the budget.
    """
    n = g.n
    k = h.k
    if use_closed_form and _as_cycle(h) is not None:
        power = np.linalg.matrix_power(g.weights, k)
        return float(np.trace(power))
    if float(n) ** k > budget:
        raise BudgetError(f"enumerating {n}**{k} maps exceeds the budget {budget}")
    if not h.edges:
        return float(n) ** k
    edges = h.edge_list
    touched = sorted({i for e in edges for i in e})
    remap = {p: i for i, p in enumerate(touched)}
    sizes = np.full(len(touched), n, dtype=np.int64)
    blocks = [g.weights for _ in edges]
    total = _kernels.hom_star_sum(sizes, [(remap[u], remap[v]) for u, v in edges], blocks)
    return float(total) * float(n) ** (k - len(touched))
