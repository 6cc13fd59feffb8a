"""Deterministic expander sketches for quadratic-pair-sum estimation.

The sketch is a sparse nonnegative-integer matrix M of effective degree d
with a certified bound on ||(d/n) J - M||. For any vector v it yields

    |(sum_i v_i)**2 - (n/d) v^T M v| <= error_bound * (n/d) * ||v||**2,

so scalar products along its support estimate full quadratic sums. The
construction powers the 8-regular Margulis graph on Z_m x Z_m, whose
nontrivial eigenvalues are at most 5 * sqrt(2) (Gabber--Galil), and
restricts it to the first n vertices. When the requested degree reaches n,
the all-ones matrix is returned instead: it is exact and costs nothing to
build, which is what happens for every certified run at realistic sizes.
"""

import math
from dataclasses import dataclass

import numpy as np

from cutdecomp.errors import BudgetError, InputError

# spectral decay per power: 1 - log_8(5 * sqrt(2))
C_TILDE = 1.0 - math.log(5.0 * math.sqrt(2.0)) / math.log(8.0)

BASE_DEGREE = 8
DEFAULT_WALK_BUDGET = 1 << 25  # endpoints stored across all walk lists


@dataclass(frozen=True, eq=False)
class ExpanderSketch:
    """Sparse symmetric walk-count matrix with a certified spectral error.

    ``pairs_i``/``pairs_j`` list the stored unordered pairs (i <= j, loops
    allowed) and ``mult`` their positive integer multiplicities. ``exact``
    marks the all-ones fallback M = J_n with d = n and zero error.
    """

    n: int
    d: float
    error_bound: float
    exact: bool
    pairs_i: np.ndarray = None
    pairs_j: np.ndarray = None
    mult: np.ndarray = None
    d_tilde: float = None
    modulus: int = None
    power: int = None

    def __post_init__(self):
        if self.n < 1:
            raise InputError("sketch needs n >= 1")
        if self.exact:
            return
        if self.pairs_i is None or self.pairs_j is None or self.mult is None:
            raise InputError("non-exact sketch needs explicit pair arrays")
        if self.mult.size and self.mult.min() < 1:
            raise InputError("multiplicities must be positive integers")
        if np.any(self.pairs_i > self.pairs_j):
            raise InputError("pairs must be stored with i <= j")
        row = np.zeros(self.n, dtype=np.int64)
        np.add.at(row, self.pairs_i, self.mult)
        off = self.pairs_i != self.pairs_j
        np.add.at(row, self.pairs_j[off], self.mult[off])
        if self.d_tilde is not None and row.size and row.max() > self.d_tilde:
            raise InputError("row sums exceed the regular degree of the powered graph")

    def multiplicity(self, i, j):
        if self.exact:
            return 1
        a, b = (i, j) if i <= j else (j, i)
        hit = np.flatnonzero((self.pairs_i == a) & (self.pairs_j == b))
        return int(self.mult[hit[0]]) if hit.size else 0

    def dense(self):
        """Dense form of M, for oracles and small tests."""
        m = np.zeros((self.n, self.n))
        if self.exact:
            m[:] = 1.0
            return m
        np.add.at(m, (self.pairs_i, self.pairs_j), self.mult)
        off = self.pairs_i != self.pairs_j
        np.add.at(m, (self.pairs_j[off], self.pairs_i[off]), self.mult[off])
        return m


def exact_sketch(n) -> ExpanderSketch:
    """The fallback M = J_n: d = n, zero error."""
    return ExpanderSketch(n=n, d=float(n), error_bound=0.0, exact=True)


def margulis_neighbors(m, v):
    """The eight neighbors of (x, y) on Z_m x Z_m, with multiplicity.

    Generators come in inverse pairs, so the induced multigraph is
    symmetric and 8-regular.
    """
    if m < 1:
        raise InputError("modulus must be at least 1")
    x, y = v
    return [
        ((x + 2 * y) % m, y),
        ((x - 2 * y) % m, y),
        ((x + 2 * y + 1) % m, y),
        ((x - (2 * y + 1)) % m, y),
        (x, (y + 2 * x) % m),
        (x, (y - 2 * x) % m),
        (x, (y + 2 * x + 1) % m),
        (x, (y - (2 * x + 1)) % m),
    ]


def build_base(m) -> np.ndarray:
    """Neighbor lists of the Margulis graph: shape (m*m, 8), int64.

    Vertex (x, y) gets index x * m + y (row-major order on Z_m x Z_m).
    """
    if m < 1:
        raise InputError("modulus must be at least 1")
    lists = np.empty((m * m, BASE_DEGREE), dtype=np.int64)
    for x in range(m):
        for y in range(m):
            lists[x * m + y] = [a * m + b for (a, b) in margulis_neighbors(m, (x, y))]
    return lists


def power_walks(base, k, walk_budget=DEFAULT_WALK_BUDGET) -> np.ndarray:
    """Endpoint lists of all length-k walks: shape (n~, 8**k).

    Row v of the result enumerates the 8**k walk endpoints from v, so the
    induced count matrix equals the k-th power of the base adjacency.
    """
    if k < 1:
        raise InputError("power must be at least 1")
    n_til = base.shape[0]
    if BASE_DEGREE**k * n_til > walk_budget:
        raise BudgetError(
            f"walk lists need {BASE_DEGREE ** k * n_til} endpoints, budget {walk_budget}"
        )
    lists = base
    for _ in range(k - 1):
        # endpoints of (i+1)-walks: 1 base step, then all i-walk endpoints
        lists = lists[base].reshape(n_til, -1)
    return lists


def build_sketch(n, d0, walk_budget=DEFAULT_WALK_BUDGET) -> ExpanderSketch:
    """Sketch of effective degree at least d0 on n vertices.

    Falls back to the exact all-ones sketch whenever d0 >= n or the walk
    lists would not fit the budget; otherwise powers the Margulis graph on
    Z_m x Z_m with m = ceil(sqrt(n)), taking the smallest k with
    8**k >= d0 * m*m / n so the restricted effective degree d = (n/m*m) * 8**k
    reaches d0. The certified bound is (K d)**(1 - c~) with K = m*m / n.
    """
    if n < 1:
        raise InputError("sketch needs n >= 1")
    if d0 < 1:
        raise InputError("requested degree must be at least 1")
    if d0 >= n:
        return exact_sketch(n)
    m = math.isqrt(n)
    if m * m < n:
        m += 1
    n_til = m * m
    k = 1
    while BASE_DEGREE**k < d0 * n_til / n:
        k += 1
    if BASE_DEGREE**k * n_til > walk_budget:
        return exact_sketch(n)
    lists = power_walks(build_base(m), k, walk_budget)
    d_tilde = float(BASE_DEGREE**k)
    d = d_tilde * n / n_til
    big_k = n_til / n
    error_bound = (big_k * d) ** (1.0 - C_TILDE)

    # restrict to the first n vertices; keep each unordered pair once
    reps = lists.shape[1]
    u = np.repeat(np.arange(n, dtype=np.int64), reps)
    w = lists[:n].ravel()
    keep = (w < n) & (w >= u)
    enc = u[keep] * np.int64(n_til) + w[keep]
    uniq, counts = np.unique(enc, return_counts=True)
    return ExpanderSketch(
        n=n,
        d=d,
        error_bound=error_bound,
        exact=False,
        pairs_i=(uniq // n_til).astype(np.int64),
        pairs_j=(uniq % n_til).astype(np.int64),
        mult=counts.astype(np.int64),
        d_tilde=d_tilde,
        modulus=m,
        power=k,
    )


def certified_degree(C, eps) -> float:
    """Degree that certifies the sketch for entry bound C and target eps.

    Solves (4 d)**(1 - c~) <= (eps**4 / 3) * d / C**2 for d, using the worst
    restriction ratio K <= 4; computed in log space and may overflow to inf,
    which downstream code treats as "use the exact sketch".
    """
    if eps <= 0:
        raise InputError("eps must be positive")
    log_d = (
        math.log(3.0) + 2.0 * math.log(C) - 4.0 * math.log(eps) + (1.0 - C_TILDE) * math.log(4.0)
    ) / C_TILDE
    try:
        return math.exp(log_d)
    except OverflowError:
        return math.inf


def is_certified(sketch: ExpanderSketch, C, eps) -> bool:
    """Whether the sketch's certified error suffices for (C, eps) testing.

    The requirement is error_bound * (n/d) * C**2 * n <= (eps**4 / 3) * n**2,
    the per-column-pair slack the regularity test budgets for.
    """
    if sketch.exact:
        return True
    return sketch.error_bound <= (eps**4 / 3.0) * sketch.d / (C * C)
