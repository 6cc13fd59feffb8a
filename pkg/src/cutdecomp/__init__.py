"""Deterministic cut decompositions, weak regularity partitions, and
homomorphism counting for dense graphs and matrices.

Every certificate this package emits can be rechecked: witness rectangles
are recomputed before being returned, decompositions replay bit-exactly
from their stored terms, and the ``oracle`` module provides independent
brute-force verifiers for spectral norms, cut norms, and subgraph counts.
"""

from cutdecomp._kernels import backend as kernel_backend
from cutdecomp._kernels import compiled_available
from cutdecomp.core import (
    CutDecomposition,
    CutTerm,
    MatrixNorms,
    PartiteGraph,
    PatternGraph,
    WeightedGraph,
    graph_to_matrix,
    norms,
    rect_sum,
    residual,
    subtract_cut,
)
from cutdecomp.decompose import (
    DecomposeConfig,
    FKPartition,
    decompose_graph,
    decompose_matrix,
    default_iteration_cap,
    faithful_weight,
    refine_partition,
    trim,
)
from cutdecomp.errors import (
    BudgetError,
    CutDecompError,
    InputError,
    PartialDecompositionError,
    SketchTooWeakError,
)
from cutdecomp.expander import (
    ExpanderSketch,
    build_base,
    build_sketch,
    certified_degree,
    exact_sketch,
    margulis_neighbors,
    power_walks,
)
from cutdecomp.homcount import (
    CountConfig,
    approx_hom,
    approx_hom_star,
    blow_up,
    clamp_estimate,
    hom_star_exact,
)
from cutdecomp.spectral import (
    Regular,
    Witness,
    column_scores,
    edge_products,
    singular_test,
    witness_floor,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "CountConfig",
    "CutDecompError",
    "CutDecomposition",
    "CutTerm",
    "DecomposeConfig",
    "ExpanderSketch",
    "FKPartition",
    "InputError",
    "MatrixNorms",
    "PartialDecompositionError",
    "PartiteGraph",
    "PatternGraph",
    "Regular",
    "SketchTooWeakError",
    "WeightedGraph",
    "Witness",
    "approx_hom",
    "approx_hom_star",
    "blow_up",
    "build_base",
    "build_sketch",
    "certified_degree",
    "clamp_estimate",
    "column_scores",
    "compiled_available",
    "decompose_graph",
    "decompose_matrix",
    "default_iteration_cap",
    "edge_products",
    "exact_sketch",
    "faithful_weight",
    "graph_to_matrix",
    "hom_star_exact",
    "kernel_backend",
    "margulis_neighbors",
    "norms",
    "power_walks",
    "rect_sum",
    "refine_partition",
    "residual",
    "singular_test",
    "subtract_cut",
    "trim",
    "witness_floor",
]
