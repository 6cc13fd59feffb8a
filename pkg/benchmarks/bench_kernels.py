#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallbacks.

Times each hot kernel on representative sizes, then one end-to-end
decomposition per backend. Run from the repository root:

    python3 benchmarks/bench_kernels.py [--n 1500] [--repeats 3]
"""

import argparse
import time

import numpy as np

from cutdecomp import _kernels
from cutdecomp._kernels import _pykernels, compiled_available
from cutdecomp.core import graph_to_matrix
from cutdecomp.decompose import DecomposeConfig, decompose_matrix


def timed(fn, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_kernel(name, make_args, repeats):
    args = make_args()
    py_fn = getattr(_pykernels, name)
    t_py, r_py = timed(lambda: py_fn(*args), repeats)
    row = {"kernel": name, "python": t_py, "compiled": None, "speedup": None}
    if compiled_available():
        from cutdecomp._kernels import _ckernels

        c_fn = getattr(_ckernels, name)
        t_c, r_c = timed(lambda: c_fn(*args), repeats)
        row["compiled"] = t_c
        row["speedup"] = t_py / t_c
        check_agreement(name, r_py, r_c)
    return row


def check_agreement(name, a, b):
    if isinstance(a, tuple):
        for x, y in zip(a, b):
            check_agreement(name, x, y)
        return
    if isinstance(a, np.ndarray):
        assert np.allclose(a, b, rtol=1e-9, atol=1e-9), f"{name}: backends disagree"
    else:
        assert abs(float(a) - float(b)) <= 1e-9 * max(1.0, abs(float(a))), (
            f"{name}: backends disagree"
        )


def random_graph_matrix(n, seed):
    gen = np.random.default_rng(seed)
    upper = np.triu(gen.random((n, n)) < 0.5, 1).astype(np.float64)
    w = upper + upper.T
    d = w.sum() / (n * n)
    return w - d


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=1500)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()
    n = args.n
    gen = np.random.default_rng(0)

    a = gen.uniform(-1, 1, size=(n, n))
    npairs = 256 * n
    I = np.sort(gen.integers(0, n, size=npairs)).astype(np.int64)
    J = np.maximum(I, gen.integers(0, n, size=npairs).astype(np.int64))
    w = gen.standard_normal(npairs)

    small = gen.uniform(-1, 1, size=(20, 20))
    hom_sizes = np.array([100, 100, 100], dtype=np.int64)
    hom_edges = [(0, 1), (0, 2), (1, 2)]
    hom_blocks = [gen.random((100, 100)) for _ in range(3)]

    rows = [
        bench_kernel("pair_dots", lambda: (a, I, J), args.repeats),
        bench_kernel("pair_column_scores", lambda: (a, I, J, w), args.repeats),
        bench_kernel("trim_run", lambda: (a + 0.1, 0.05 * n / 6.0), args.repeats),
        bench_kernel("cutnorm_enum", lambda: (small,), args.repeats),
        bench_kernel("hom_star_sum", lambda: (hom_sizes, hom_edges, hom_blocks), args.repeats),
    ]

    print(f"kernel benchmarks at n={n} ({npairs} sketch pairs), best of {args.repeats}")
    print(f"{'kernel':22s} {'python':>10s} {'compiled':>10s} {'speedup':>8s}")
    for r in rows:
        comp = f"{r['compiled']:.4f}s" if r["compiled"] is not None else "n/a"
        sp = f"{r['speedup']:.1f}x" if r["speedup"] is not None else "-"
        print(f"{r['kernel']:22s} {r['python']:9.4f}s {comp:>10s} {sp:>8s}")

    # end-to-end: one sketch-mode decomposition of a centered random graph
    mat = random_graph_matrix(1000, seed=1)
    cfg = DecomposeConfig(sketch_degree_override=64.0)
    for backend in ("python", "compiled") if compiled_available() else ("python",):
        _kernels.set_backend(backend)
        t, d = timed(lambda: decompose_matrix(mat, 0.5, cfg), args.repeats)
        print(f"decompose n=1000 sketch-degree=64 [{backend:8s}]: {t:.3f}s ({d.r} terms)")
    if compiled_available():
        _kernels.set_backend("compiled")


if __name__ == "__main__":
    main()
