"""Dense matrix / graph data model and shared rectangle arithmetic.

Conventions used throughout the package:

* matrices are square, C-contiguous float64 arrays; entry (i, k) sits at
  row i, column k;
* vertex sets are strictly increasing int64 index arrays;
* pair counts are ordered: e(X, Y) ranges over all (x, y) in X x Y, so
  graph densities carry an n**2 denominator (diagonal included, loops
  weigh zero);
* summation order is fixed, so identical inputs reproduce bit-identical
  results run to run.

All values are immutable after construction and safe to share.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from cutdecomp.errors import InputError


def as_matrix(a) -> np.ndarray:
    """Validate and normalize a square matrix to C-contiguous float64."""
    m = np.ascontiguousarray(np.asarray(a, dtype=np.float64))
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] < 1:
        raise InputError("matrix dimension must be at least 1")
    if not np.isfinite(m).all():
        raise InputError("matrix entries must be finite")
    return m


def as_vertex_set(indices, n) -> np.ndarray:
    """Validate a strictly increasing index sequence over [0, n)."""
    s = np.asarray(indices, dtype=np.int64).reshape(-1)
    if s.size:
        if s[0] < 0 or s[-1] >= n:
            raise InputError(f"vertex index out of range [0, {n})")
        if s.size > 1 and not (np.diff(s) > 0).all():
            raise InputError("vertex set must be strictly increasing (sorted, no duplicates)")
    return s


@dataclass(frozen=True, eq=False)
class CutTerm:
    """One weighted cut: weight c on the rectangle S x T."""

    S: np.ndarray
    T: np.ndarray
    c: float


@dataclass(frozen=True, eq=False)
class CutDecomposition:
    """Approximation of a matrix or graph by base * J plus weighted cuts.

    ``base`` is the overall density for graph decompositions and zero for
    pure matrix ones. ``certified`` records whether every regularity verdict
    along the run was backed by a certified sketch, in which case the
    residual's spectral norm is at most epsilon * n.
    """

    n: int
    base: float
    terms: tuple
    epsilon: float
    mode: str
    certified: bool = False

    def __post_init__(self):
        if self.mode not in ("faithful", "practical"):
            raise InputError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def r(self):
        return len(self.terms)


class MatrixNorms(NamedTuple):
    frobenius_sq: float
    max_abs: float
    row_l2_sq: np.ndarray
    col_l2_sq: np.ndarray


def rect_sum(A, S, T) -> float:
    """Sum of the entries of A over the rectangle S x T (row-major order)."""
    A = as_matrix(A)
    n = A.shape[0]
    S = as_vertex_set(S, n)
    T = as_vertex_set(T, n)
    if S.size == 0 or T.size == 0:
        return 0.0
    return float(A[np.ix_(S, T)].sum())


def subtract_cut(A, t, S, T) -> np.ndarray:
    """Return a copy of A with t subtracted on the rectangle S x T."""
    A = as_matrix(A)
    n = A.shape[0]
    S = as_vertex_set(S, n)
    T = as_vertex_set(T, n)
    out = A.copy()
    if S.size and T.size:
        out[np.ix_(S, T)] -= t
    return out


def norms(A) -> MatrixNorms:
    """Frobenius square, entrywise max, and per-row/column squared L2 norms."""
    A = as_matrix(A)
    sq = A * A
    return MatrixNorms(
        frobenius_sq=float(sq.sum()),
        max_abs=float(np.abs(A).max()),
        row_l2_sq=sq.sum(axis=1),
        col_l2_sq=sq.sum(axis=0),
    )


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Symmetric [0,1]-weighted graph on n vertices with a zero diagonal."""

    weights: np.ndarray

    def __post_init__(self):
        w = as_matrix(self.weights)
        if not np.array_equal(w, w.T):
            raise InputError("graph weights must be exactly symmetric")
        if np.any(np.diagonal(w) != 0.0):
            raise InputError("self-loops are not allowed (diagonal must be zero)")
        if w.min() < 0.0 or w.max() > 1.0:
            raise InputError("edge weights must lie in [0, 1]")
        object.__setattr__(self, "weights", w)

    @property
    def n(self):
        return self.weights.shape[0]

    @classmethod
    def from_edges(cls, n, edges):
        """Build from (u, v) or (u, v, w) tuples; rejects loops and duplicates."""
        w = np.zeros((n, n), dtype=np.float64)
        seen = set()
        for e in edges:
            if len(e) == 2:
                u, v, wt = e[0], e[1], 1.0
            else:
                u, v, wt = e
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InputError(f"self-loop at vertex {u} rejected")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InputError(f"duplicate edge ({u}, {v})")
            seen.add(key)
            if not (0.0 <= wt <= 1.0):
                raise InputError(f"edge weight {wt} outside [0, 1]")
            w[u, v] = wt
            w[v, u] = wt
        return cls(w)


def graph_to_matrix(g: WeightedGraph):
    """Center a graph's weight matrix: returns (A_G - density * J, density).

    Density is the ordered-pair average, sum of all weights over n**2. The
    centered matrix has entries in [-1, 1] and every row and column squared
    L2 norm at most n, which is what the decomposition loop requires.
    """
    w = g.weights
    n = g.n
    density = float(w.sum()) / (n * n)
    a = w - density
    return a, density


def residual(A, d: CutDecomposition) -> np.ndarray:
    """A minus the decomposition, applying base then terms in stored order.

    Replays exactly the floating-point updates of the decomposition loop, so
    the result is bit-identical to the loop's final residual.
    """
    A = as_matrix(A)
    if d.n != A.shape[0]:
        raise InputError(f"decomposition is for n={d.n}, matrix has n={A.shape[0]}")
    out = A.copy()
    if d.base != 0.0:
        out -= d.base
    for term in d.terms:
        out[np.ix_(term.S, term.T)] -= term.c
    return out


@dataclass(frozen=True, eq=False)
class PatternGraph:
    """Simple graph on vertex set [k], the pattern whose copies are counted."""

    k: int
    edges: frozenset

    def __post_init__(self):
        if self.k < 1:
            raise InputError("pattern must have at least one vertex")
        norm = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise InputError("pattern loops are not allowed")
            if not (0 <= u < self.k and 0 <= v < self.k):
                raise InputError(f"pattern edge {e} out of range for k={self.k}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @property
    def edge_list(self):
        return sorted(self.edges)

    def remove_edge(self, e):
        return PatternGraph(self.k, self.edges - {e})

    @classmethod
    def complete(cls, k):
        return cls(k, frozenset((i, j) for i in range(k) for j in range(i + 1, k)))

    @classmethod
    def cycle(cls, k):
        if k < 3:
            raise InputError("cycles need at least 3 vertices")
        return cls(k, frozenset((i, (i + 1) % k) for i in range(k)))

    @classmethod
    def single_edge(cls):
        return cls(2, frozenset({(0, 1)}))


@dataclass(frozen=True, eq=False)
class PartiteGraph:
    """k vertex parts with a [0,1]-weighted bipartite block per part pair.

    ``blocks`` maps (i, j) with i < j to a |V_i| x |V_j| array; ``block``
    serves either orientation via transposition. Missing pairs mean an
    all-zero block.
    """

    sizes: tuple
    blocks: dict

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if any(s < 0 for s in sizes):
            raise InputError("part sizes must be nonnegative")
        object.__setattr__(self, "sizes", sizes)
        k = len(sizes)
        checked = {}
        for (i, j), blk in self.blocks.items():
            if not (0 <= i < j < k):
                raise InputError(f"block key ({i}, {j}) must satisfy 0 <= i < j < k")
            b = np.ascontiguousarray(np.asarray(blk, dtype=np.float64))
            if b.shape != (sizes[i], sizes[j]):
                raise InputError(
                    f"block ({i}, {j}) has shape {b.shape}, expected {(sizes[i], sizes[j])}"
                )
            if b.size and (b.min() < 0.0 or b.max() > 1.0):
                raise InputError(f"block ({i}, {j}) has entries outside [0, 1]")
            checked[(i, j)] = b
        object.__setattr__(self, "blocks", checked)

    @property
    def k(self):
        return len(self.sizes)

    def block(self, i, j):
        """The (i, j) block oriented with part i on rows."""
        if i == j:
            raise InputError("no block between a part and itself")
        if i < j:
            blk = self.blocks.get((i, j))
            return blk if blk is not None else np.zeros((self.sizes[i], self.sizes[j]))
        blk = self.blocks.get((j, i))
        return blk.T if blk is not None else np.zeros((self.sizes[i], self.sizes[j]))

    def restrict(self, selections):
        """Materialize the subgraph keeping ``selections[i]`` inside part i.

        ``selections`` maps part index to a sorted index array; omitted parts
        are kept whole.
        """
        idx = []
        for i in range(self.k):
            if i in selections:
                idx.append(as_vertex_set(selections[i], self.sizes[i]))
            else:
                idx.append(np.arange(self.sizes[i], dtype=np.int64))
        sizes = tuple(ix.size for ix in idx)
        blocks = {}
        for (i, j), blk in self.blocks.items():
            blocks[(i, j)] = blk[np.ix_(idx[i], idx[j])]
        return PartiteGraph(sizes, blocks)
