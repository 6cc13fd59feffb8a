import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutdecomp.core import (
    CutDecomposition,
    CutTerm,
    PartiteGraph,
    PatternGraph,
    WeightedGraph,
    graph_to_matrix,
    norms,
    rect_sum,
    residual,
    subtract_cut,
)
from cutdecomp.decompose import decompose_matrix
from cutdecomp.errors import InputError

from conftest import complete_bipartite, complete_graph, empty_graph, random_pm1


class TestRectSum:
    def test_direct(self):
        a = np.array([[1.0, 2.0], [3.0, 4.0]])
        assert rect_sum(a, [0], [0, 1]) == 3.0

    def test_empty_side(self):
        a = random_pm1(5, seed=1)
        assert rect_sum(a, [], [0, 1, 2]) == 0.0
        assert rect_sum(a, [1, 3], []) == 0.0

    def test_all_ones(self):
        assert rect_sum(np.ones((3, 3)), [0, 1, 2], [0, 1, 2]) == 9.0

    def test_out_of_range(self):
        with pytest.raises(InputError):
            rect_sum(np.ones((3, 3)), [0, 3], [0])
        with pytest.raises(InputError):
            rect_sum(np.ones((3, 3)), [0], [-1])

    def test_unsorted_rejected(self):
        with pytest.raises(InputError):
            rect_sum(np.ones((3, 3)), [1, 0], [0])
        with pytest.raises(InputError):
            rect_sum(np.ones((3, 3)), [1, 1], [0])


class TestSubtractCut:
    def test_ones_to_zero(self):
        out = subtract_cut(np.ones((2, 2)), 1.0, [0, 1], [0, 1])
        assert np.array_equal(out, np.zeros((2, 2)))

    def test_single_entry(self):
        out = subtract_cut(np.zeros((3, 3)), 0.5, [0], [2])
        expected = np.zeros((3, 3))
        expected[0, 2] = -0.5
        assert np.array_equal(out, expected)

    def test_untouched_entries_bit_identical(self):
        a = random_pm1(6, seed=2)
        out = subtract_cut(a, 0.3, [1, 4], [0, 5])
        mask = np.zeros((6, 6), dtype=bool)
        mask[np.ix_([1, 4], [0, 5])] = True
        assert np.array_equal(out[~mask], a[~mask])

    def test_frobenius_expansion(self):
        # ||A - tK||_F^2 = ||A||_F^2 - 2 t <A, K> + |S||T| t^2
        a = random_pm1(5, seed=3)
        S, T = [0, 2, 3], [1, 4]
        t = 0.7
        out = subtract_cut(a, t, S, T)
        expected = (a * a).sum() - 2 * t * rect_sum(a, S, T) + len(S) * len(T) * t * t
        assert abs((out * out).sum() - expected) < 1e-12 * 25

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 8), st.floats(-2, 2, allow_nan=False), st.integers(0, 10**9))
    def test_rect_sum_drop(self, n, t, seed):
        a = random_pm1(n, seed=seed)
        S = np.arange(0, n, 2)
        T = np.arange(n // 2, n)
        if S.size == 0 or T.size == 0:
            return
        before = rect_sum(a, S, T)
        after = rect_sum(subtract_cut(a, t, S, T), S, T)
        assert abs(before - after - S.size * T.size * t) < 1e-12 * n * n * 4


class TestNorms:
    def test_identity(self):
        nm = norms(np.eye(3))
        assert nm.frobenius_sq == 3.0
        assert nm.max_abs == 1.0

    def test_zero(self):
        nm = norms(np.zeros((4, 4)))
        assert nm.frobenius_sq == 0.0
        assert nm.max_abs == 0.0
        assert np.all(nm.row_l2_sq == 0)

    def test_sign_matrix(self):
        nm = norms(np.array([[1.0, -1.0], [-1.0, 1.0]]))
        assert nm.frobenius_sq == 4.0
        assert np.all(nm.row_l2_sq == 2.0)
        assert np.all(nm.col_l2_sq == 2.0)

    def test_incremental_matches_fresh(self):
        a = random_pm1(7, seed=4)
        S, T = [0, 3], [2, 5, 6]
        t = 0.4
        out = subtract_cut(a, t, S, T)
        # maintain the Frobenius square incrementally, compare to fresh
        inc = norms(a).frobenius_sq - 2 * t * rect_sum(a, S, T) + len(S) * len(T) * t * t
        fresh = norms(out).frobenius_sq
        assert abs(inc - fresh) <= 1e-9 * max(fresh, 1.0)


class TestGraphToMatrix:
    def test_empty(self):
        a, d = graph_to_matrix(empty_graph(4))
        assert d == 0.0
        assert np.array_equal(a, np.zeros((4, 4)))

    def test_complete_k3(self):
        a, d = graph_to_matrix(complete_graph(3))
        assert d == pytest.approx(2.0 / 3.0)
        assert np.allclose(np.diagonal(a), -2.0 / 3.0)
        off = a[~np.eye(3, dtype=bool)]
        assert np.allclose(off, 1.0 / 3.0)

    def test_k22(self):
        a, d = graph_to_matrix(complete_bipartite(2, 2))
        assert d == 0.5
        assert np.allclose(np.abs(a), 0.5)
        assert np.allclose(a[:2, 2:], 0.5)
        assert np.allclose(a[:2, :2], -0.5)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 12), st.integers(0, 10**9))
    def test_bounds_always(self, n, seed):
        w = np.random.default_rng(seed).random((n, n))
        w = np.triu(w, 1)
        g = WeightedGraph(w + w.T)
        a, d = graph_to_matrix(g)
        nm = norms(a)
        assert nm.max_abs <= 1.0
        assert nm.row_l2_sq.max() <= n
        assert nm.col_l2_sq.max() <= n


class TestResidual:
    def test_no_terms(self):
        a = random_pm1(4, seed=5)
        d = CutDecomposition(n=4, base=0.0, terms=(), epsilon=0.5, mode="practical")
        assert np.array_equal(residual(a, d), a)

    def test_base_only(self):
        d = CutDecomposition(n=2, base=1.0, terms=(), epsilon=0.5, mode="practical")
        assert np.array_equal(residual(np.ones((2, 2)), d), np.zeros((2, 2)))

    def test_dimension_mismatch(self):
        d = CutDecomposition(n=3, base=0.0, terms=(), epsilon=0.5, mode="practical")
        with pytest.raises(InputError):
            residual(np.ones((2, 2)), d)

    def test_round_trip_replays_loop_bitwise(self):
        # the stored terms replay the loop's in-place updates exactly
        a = random_pm1(20, seed=6) * 0.9
        a[2:8, 11:19] += 0.05  # make a witness likely
        np.clip(a, -1.0, 1.0, out=a)
        d = decompose_matrix(a, 0.35)
        work = a.copy()
        for t in d.terms:
            work[np.ix_(t.S, t.T)] -= t.c
        assert np.array_equal(residual(a, d), work)


class TestGraphValidation:
    def test_asymmetric_rejected(self):
        w = np.zeros((3, 3))
        w[0, 1] = 1.0
        with pytest.raises(InputError):
            WeightedGraph(w)

    def test_self_loop_rejected(self):
        w = np.zeros((2, 2))
        w[0, 0] = 1.0
        with pytest.raises(InputError):
            WeightedGraph(w)
        with pytest.raises(InputError):
            WeightedGraph.from_edges(3, [(1, 1)])

    def test_range_rejected(self):
        w = np.full((2, 2), 1.5)
        np.fill_diagonal(w, 0.0)
        with pytest.raises(InputError):
            WeightedGraph(w)

    def test_duplicate_edge_rejected(self):
        with pytest.raises(InputError):
            WeightedGraph.from_edges(3, [(0, 1), (1, 0)])


class TestPartiteAndPattern:
    def test_block_orientation(self):
        blk = np.array([[0.1, 0.2, 0.3], [0.4, 0.5, 0.6]])
        g = PartiteGraph(sizes=(2, 3), blocks={(0, 1): blk})
        assert np.array_equal(g.block(0, 1), blk)
        assert np.array_equal(g.block(1, 0), blk.T)

    def test_block_range_checked(self):
        with pytest.raises(InputError):
            PartiteGraph(sizes=(2, 2), blocks={(0, 1): np.full((2, 2), 1.5)})

    def test_restrict(self):
        blk = np.arange(12, dtype=float).reshape(3, 4) / 12.0
        g = PartiteGraph(sizes=(3, 4), blocks={(0, 1): blk})
        sub = g.restrict({0: [0, 2], 1: [1, 3]})
        assert sub.sizes == (2, 2)
        assert np.array_equal(sub.block(0, 1), blk[np.ix_([0, 2], [1, 3])])

    def test_pattern_normalizes_edges(self):
        h = PatternGraph(3, frozenset({(2, 0)}))
        assert h.edge_list == [(0, 2)]
        with pytest.raises(InputError):
            PatternGraph(3, frozenset({(1, 1)}))
        with pytest.raises(InputError):
            PatternGraph(2, frozenset({(0, 5)}))
