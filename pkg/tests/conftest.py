"""Shared corpus builders. Everything is seeded: reruns see identical data."""

import numpy as np
import pytest

from cutdecomp.core import WeightedGraph


def rng(seed):
    return np.random.default_rng(seed)


def random_pm1(n, seed):
    """Uniform entries in [-1, 1]; rows/columns automatically satisfy L2^2 <= n."""
    return rng(seed).uniform(-1.0, 1.0, size=(n, n))


def random_sign(n, seed):
    return rng(seed).choice([-1.0, 1.0], size=(n, n))


def gnp_graph(n, p, seed):
    """Symmetric Bernoulli(p) graph with a zero diagonal."""
    upper = rng(seed).random((n, n)) < p
    w = np.triu(upper, 1).astype(np.float64)
    return WeightedGraph(w + w.T)


def complete_graph(n):
    w = np.ones((n, n)) - np.eye(n)
    return WeightedGraph(w)


def complete_bipartite(a, b):
    n = a + b
    w = np.zeros((n, n))
    w[:a, a:] = 1.0
    w[a:, :a] = 1.0
    return WeightedGraph(w)


def cycle_graph(n):
    edges = [(i, (i + 1) % n) for i in range(n)]
    return WeightedGraph.from_edges(n, edges)


def star_graph(n):
    return WeightedGraph.from_edges(n, [(0, i) for i in range(1, n)])


def path_graph(n):
    return WeightedGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def empty_graph(n):
    return WeightedGraph(np.zeros((n, n)))


def planted_matrix(n, c, rows, cols, noise=0.0, seed=0):
    """c on the rows x cols rectangle plus optional uniform noise elsewhere."""
    a = np.zeros((n, n))
    if noise:
        a = rng(seed).uniform(-noise, noise, size=(n, n))
    a[np.ix_(rows, cols)] = c
    return a


def small_graph_corpus():
    """Fifty graphs on at most 14 vertices, structured and random."""
    graphs = []
    for n in (8, 10, 12, 14):
        graphs.append(complete_graph(n))
        graphs.append(complete_bipartite(n // 2, n - n // 2))
        graphs.append(cycle_graph(n))
        graphs.append(star_graph(n))
        graphs.append(path_graph(n))
    graphs.append(empty_graph(10))
    graphs.append(complete_bipartite(3, 11))
    for i, (n, p) in enumerate(
        [(n, p) for n in (9, 11, 13, 14) for p in (0.2, 0.35, 0.5, 0.65, 0.8, 0.9)]
    ):
        graphs.append(gnp_graph(n, p, seed=100 + i))
    for i in range(4):
        graphs.append(gnp_graph(14, 0.5, seed=300 + i))
    assert len(graphs) >= 50
    return graphs


@pytest.fixture(scope="session")
def small_graphs():
    return small_graph_corpus()
