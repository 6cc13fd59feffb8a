"""Command-line front end and artifact serialization.

Subcommands: decompose, partition, count, verify. Exit codes: 0 success,
1 input error, 2 partial result (iteration cap hit), 3 verification failed.

Graph files are text edge lists: lines "u v" or "u v w" with 0-indexed
vertices and weights in [0, 1] (default 1.0), '#' comments and blank lines
ignored, and an optional leading header "n <count>"; without a header the
vertex count is one past the largest index. Self-loops and duplicate edges
are rejected. Pattern files use the same format without weights.

Decomposition files are JSON and serialize every weight both as decimal
(for humans) and as a hex float, so a load/save round trip reproduces the
binary values bit for bit.
"""

import argparse
import json
import math
import sys

import numpy as np

from cutdecomp.core import (
    CutDecomposition,
    CutTerm,
    PatternGraph,
    WeightedGraph,
    norms,
    residual,
)
from cutdecomp.decompose import (
    DecomposeConfig,
    FKPartition,
    decompose_graph,
    faithful_weight,
    refine_partition,
)
from cutdecomp.errors import (
    BudgetError,
    CutDecompError,
    InputError,
    PartialDecompositionError,
    SketchTooWeakError,
)
from cutdecomp.homcount import CountConfig, approx_hom, clamp_estimate
from cutdecomp.oracle import CUT_NORM_MAX_N, exact_cut_norm, top_singular

__version__ = "0.1.0"

DECOMPOSITION_FORMAT = "cut-decomposition/1"
PARTITION_FORMAT = "fk-partition/1"

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_PARTIAL = 2
EXIT_VERIFY = 3


# ---------------------------------------------------------------- file formats

def parse_graph_text(text):
    """Parse an edge-list document into (n, [(u, v, w), ...])."""
    n_declared = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n":
            if n_declared is not None or edges:
                raise InputError(f"line {lineno}: header must come first and only once")
            if len(parts) != 2:
                raise InputError(f"line {lineno}: header must be 'n <count>'")
            try:
                n_declared = int(parts[1])
            except ValueError:
                raise InputError(f"line {lineno}: bad vertex count {parts[1]!r}") from None
            if n_declared < 0:
                raise InputError(f"line {lineno}: vertex count must be nonnegative")
            continue
        if len(parts) not in (2, 3):
            raise InputError(f"line {lineno}: expected 'u v' or 'u v w'")
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise InputError(f"line {lineno}: could not parse {line!r}") from None
        if u < 0 or v < 0:
            raise InputError(f"line {lineno}: negative vertex index")
        edges.append((u, v, w))
    if n_declared is None:
        n = 1 + max(max(u, v) for u, v, _ in edges) if edges else 0
    else:
        n = n_declared
    return n, edges


def load_graph(path):
    """Read an edge-list file; returns (n, WeightedGraph or None when n=0)."""
    try:
        with open(path, "r") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    n, edges = parse_graph_text(text)
    if n == 0:
        return 0, None
    return n, WeightedGraph.from_edges(n, edges)


def parse_pattern(spec) -> PatternGraph:
    """Pattern from a name (edge, triangle, c4, k4) or 'file:PATH'."""
    named = {
        "edge": PatternGraph.single_edge,
        "triangle": lambda: PatternGraph.complete(3),
        "c4": lambda: PatternGraph.cycle(4),
        "k4": lambda: PatternGraph.complete(4),
    }
    if spec in named:
        return named[spec]()
    if spec.startswith("file:"):
        path = spec[len("file:"):]
        try:
            with open(path, "r") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read pattern {path}: {exc}") from None
        k, edges = parse_graph_text(text)
        if any(w != 1.0 for _, _, w in edges):
            raise InputError("pattern edges cannot carry weights")
        if k == 0:
            raise InputError("pattern must have at least one vertex")
        return PatternGraph(k, frozenset((u, v) for u, v, _ in edges))
    raise InputError(f"unknown pattern {spec!r} (use edge, triangle, c4, k4, or file:PATH)")


def decomposition_to_json(d: CutDecomposition) -> dict:
    return {
        "format": DECOMPOSITION_FORMAT,
        "tool_version": __version__,
        "n": int(d.n),
        "epsilon": d.epsilon,
        "epsilon_hex": float(d.epsilon).hex(),
        "mode": d.mode,
        "certified": bool(d.certified),
        "base": d.base,
        "base_hex": float(d.base).hex(),
        "terms": [
            {
                "c": t.c,
                "c_hex": float(t.c).hex(),
                "S": [int(i) for i in t.S],
                "T": [int(i) for i in t.T],
            }
            for t in d.terms
        ],
    }


def decomposition_from_json(obj) -> CutDecomposition:
    try:
        if obj["format"] != DECOMPOSITION_FORMAT:
            raise InputError(f"unsupported format {obj.get('format')!r}")
        n = int(obj["n"])
        terms = tuple(
            CutTerm(
                S=np.asarray(t["S"], dtype=np.int64),
                T=np.asarray(t["T"], dtype=np.int64),
                c=float.fromhex(t["c_hex"]),
            )
            for t in obj["terms"]
        )
        return CutDecomposition(
            n=n,
            base=float.fromhex(obj["base_hex"]),
            terms=terms,
            epsilon=float.fromhex(obj["epsilon_hex"]),
            mode=obj["mode"],
            certified=bool(obj["certified"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed decomposition file: {exc}") from None


def write_json(path, obj):
    data = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    with open(path, "w") as fh:
        fh.write(data)


def load_decomposition(path) -> CutDecomposition:
    try:
        with open(path, "r") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None
    return decomposition_from_json(obj)


# ---------------------------------------------------------------- subcommands

def _check_epsilon(eps):
    if not (0.0 < eps < 1.0):
        raise InputError(f"epsilon must satisfy 0 < epsilon < 1, got {eps}")


def _decompose_config(args) -> DecomposeConfig:
    return DecomposeConfig(
        mode=args.mode,
        max_iterations=args.max_iter,
        sketch_degree_override=args.sketch_degree,
    )


def _empty_decomposition(args) -> CutDecomposition:
    return CutDecomposition(
        n=0, base=0.0, terms=(), epsilon=args.epsilon, mode=args.mode, certified=True
    )


def cmd_decompose(args) -> int:
    _check_epsilon(args.epsilon)
    n, g = load_graph(args.input)
    if n == 0:
        write_json(args.output, decomposition_to_json(_empty_decomposition(args)))
        print("n: 0\nterms: 0\ncertified: True")
        return EXIT_OK
    partial = False
    try:
        d = decompose_graph(g, args.epsilon, _decompose_config(args))
    except PartialDecompositionError as exc:
        d = exc.decomposition
        partial = True
    write_json(args.output, decomposition_to_json(d))
    res = residual(g.weights, d)
    print(f"n: {d.n}")
    print(f"mode: {d.mode}")
    print(f"epsilon: {d.epsilon!r}")
    print(f"terms: {d.r}")
    print(f"certified: {d.certified}")
    print(f"residual frobenius: {math.sqrt(float((res * res).sum()))!r}")
    if partial:
        print("partial: iteration cap reached before the residual tested regular")
        return EXIT_PARTIAL
    return EXIT_OK


def _partition_json(p: FKPartition, d: CutDecomposition) -> dict:
    return {
        "format": PARTITION_FORMAT,
        "tool_version": __version__,
        "n": int(d.n),
        "epsilon": d.epsilon,
        "mode": d.mode,
        "certified": bool(d.certified),
        "source_terms": d.r,
        "part_count": int(p.part_count),
        "part_of": [int(x) for x in p.part_of],
        "densities": [[float(x) for x in row] for row in p.densities],
    }


def cmd_partition(args) -> int:
    _check_epsilon(args.epsilon)
    n, g = load_graph(args.input)
    if n == 0:
        write_json(args.output, {
            "format": PARTITION_FORMAT, "tool_version": __version__, "n": 0,
            "epsilon": args.epsilon, "mode": args.mode, "certified": True,
            "source_terms": 0, "part_count": 0, "part_of": [], "densities": [],
        })
        print("part_count: 0")
        return EXIT_OK
    partial = False
    try:
        d = decompose_graph(g, args.epsilon, _decompose_config(args))
    except PartialDecompositionError as exc:
        d = exc.decomposition
        partial = True
    p = refine_partition(n, d.terms, g)
    write_json(args.output, _partition_json(p, d))
    print(f"n: {n}")
    print(f"terms: {d.r}")
    print(f"part_count: {p.part_count}")
    if partial:
        print("partial: partition built from an incomplete decomposition")
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_count(args) -> int:
    _check_epsilon(args.epsilon)
    h = parse_pattern(args.pattern)
    n, g = load_graph(args.input)
    estimate = 0.0 if n == 0 else approx_hom(
        h, g, args.epsilon,
        CountConfig(decompose=_decompose_config(args)),
    )
    scale = float(n) ** h.k
    clamped = clamp_estimate(estimate, (n,) * h.k)
    print(f"pattern: {args.pattern} ({h.k} vertices, {len(h.edges)} edges)")
    print(f"n: {n}")
    print(f"estimate: {estimate!r}")
    print(f"clamped: {clamped!r}")
    print(f"scale n^k: {scale!r}")
    print(f"error bound eps*n^k: {args.epsilon * scale!r}")
    if args.output:
        write_json(args.output, {
            "format": "hom-estimate/1", "tool_version": __version__,
            "pattern": args.pattern, "pattern_vertices": h.k,
            "pattern_edges": len(h.edges), "n": n, "epsilon": args.epsilon,
            "estimate": estimate, "estimate_hex": float(estimate).hex(),
            "clamped": clamped, "scale": scale,
            "error_bound": args.epsilon * scale,
        })
    return EXIT_OK


def cmd_verify(args) -> int:
    n, g = load_graph(args.input)
    d = load_decomposition(args.decomposition)
    if n == 0 and d.n == 0:
        print("ok dimension (empty graph)")
        return EXIT_OK

    def fail(name, detail):
        print(f"FAIL {name}: {detail}")
        return EXIT_VERIFY

    if d.n != n:
        return fail("dimension", f"decomposition has n={d.n}, graph has n={n}")
    res = residual(g.weights, d)
    nm = norms(res)
    limit = n * (1.0 + 1e-9)
    row_max = float(nm.row_l2_sq.max())
    col_max = float(nm.col_l2_sq.max())
    print(f"max row L2^2: {row_max!r} (limit {float(n)!r})")
    print(f"max col L2^2: {col_max!r}")
    if row_max > limit or col_max > limit:
        return fail("row_col_l2", "residual row/column norms exceed sqrt(n)")
    print("ok row_col_l2")

    if d.certified:
        est = top_singular(res, iters=300, tol=1e-12)
        bound = d.epsilon * n
        print(f"oracle top singular value: {est.value!r} vs eps*n = {bound!r}")
        if est.value > bound * (1.0 + 1e-6):
            return fail("spectral", f"residual singular value {est.value} exceeds {bound}")
        print("ok spectral")

    if d.mode == "faithful":
        expected = faithful_weight(d.epsilon)
        for idx, t in enumerate(d.terms):
            if abs(t.c) != expected:
                return fail(
                    "faithful_weights",
                    f"term {idx} has |c| = {t.c!r}, expected {expected!r}",
                )
        print(f"ok faithful_weights ({d.r} terms)")

    if args.exact_cutnorm:
        if n > CUT_NORM_MAX_N:
            raise InputError(f"--exact-cutnorm needs n <= {CUT_NORM_MAX_N}, got {n}")
        value, _, _ = exact_cut_norm(res)
        dist = value / (n * n)
        print(f"exact cut distance: {dist!r} vs eps = {d.epsilon!r}")
        if dist > d.epsilon:
            return fail("cut_norm", f"cut distance {dist} exceeds epsilon {d.epsilon}")
        print("ok cut_norm")

    print("verified")
    return EXIT_OK


# ---------------------------------------------------------------- entry point

class _Parser(argparse.ArgumentParser):
    # the exit-code contract reserves 2 for partial results; argparse
    # usage failures must land on 1 instead
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _add_engine_flags(sub, with_output=True, output_required=True):
    sub.add_argument("--input", required=True, help="edge-list graph file")
    sub.add_argument("--epsilon", type=float, required=True, help="target accuracy in (0, 1)")
    sub.add_argument("--mode", choices=["faithful", "practical"], default="practical")
    sub.add_argument("--max-iter", type=int, default=None, help="iteration cap")
    sub.add_argument(
        "--sketch-degree", type=float, default=None,
        help="use a sparse walk sketch of this degree (uncertified, quadratic time)",
    )
    if with_output:
        sub.add_argument("--output", required=output_required, default=None,
                         help="output JSON path")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cutdecomp", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("decompose", help="approximate a graph by weighted cuts")
    _add_engine_flags(p)
    p.set_defaults(func=cmd_decompose)

    p = subs.add_parser("partition", help="weak regularity partition")
    _add_engine_flags(p)
    p.set_defaults(func=cmd_partition)

    p = subs.add_parser("count", help="estimate homomorphism counts")
    _add_engine_flags(p, output_required=False)
    p.add_argument("--pattern", required=True,
                   help="edge | triangle | c4 | k4 | file:PATH")
    p.set_defaults(func=cmd_count)

    p = subs.add_parser("verify", help="recheck a stored decomposition")
    p.add_argument("--input", required=True, help="edge-list graph file")
    p.add_argument("--decomposition", required=True, help="decomposition JSON")
    p.add_argument("--exact-cutnorm", action="store_true",
                   help=f"exhaustive cut-norm check (n <= {CUT_NORM_MAX_N})")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SketchTooWeakError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except CutDecompError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
