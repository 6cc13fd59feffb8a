import math

import numpy as np
import pytest

from cutdecomp.errors import BudgetError, InputError
from cutdecomp.expander import (
    C_TILDE,
    ExpanderSketch,
    build_base,
    build_sketch,
    certified_degree,
    exact_sketch,
    is_certified,
    margulis_neighbors,
    power_walks,
)

FIVE_SQRT_2 = 5.0 * math.sqrt(2.0)


def dense_from_lists(lists, n_til):
    m = np.zeros((n_til, n_til))
    for v in range(n_til):
        for w in lists[v]:
            m[v, w] += 1.0
    return m


class TestMargulisNeighbors:
    def test_origin_m5(self):
        got = sorted(margulis_neighbors(5, (0, 0)))
        assert got == sorted([(0, 0)] * 4 + [(1, 0), (4, 0), (0, 1), (0, 4)])

    def test_interior_m7(self):
        got = sorted(margulis_neighbors(7, (1, 2)))
        want = sorted([(5, 2), (4, 2), (6, 2), (3, 2), (1, 4), (1, 0), (1, 5), (1, 6)])
        assert got == want

    def test_m1_all_loops(self):
        assert margulis_neighbors(1, (0, 0)) == [(0, 0)] * 8

    def test_symmetric_generators(self):
        # each neighbor relation has its inverse in the generator list
        m = 6
        counts = {}
        for x in range(m):
            for y in range(m):
                for nb in margulis_neighbors(m, (x, y)):
                    counts[((x, y), nb)] = counts.get(((x, y), nb), 0) + 1
        for (u, v), c in counts.items():
            assert counts.get((v, u), 0) == c


class TestBase:
    def test_shape_and_regularity(self):
        base = build_base(2)
        assert base.shape == (4, 8)
        dense = dense_from_lists(base, 4)
        assert np.all(dense.sum(axis=1) == 8.0)
        assert np.array_equal(dense, dense.T)

    def test_all_ones_eigenvector(self):
        dense = dense_from_lists(build_base(5), 25)
        ones = np.ones(25)
        assert np.allclose(dense @ ones, 8.0 * ones)

    def test_second_eigenvalue_m5(self):
        dense = dense_from_lists(build_base(5), 25)
        eigs = np.linalg.eigvalsh(dense)
        second = np.sort(np.abs(eigs))[-2]
        assert second <= FIVE_SQRT_2 + 1e-9


class TestPowerWalks:
    def test_identity_power(self):
        base = build_base(3)
        assert np.array_equal(power_walks(base, 1), base)

    def test_square_matches_matrix_power(self):
        base = build_base(3)
        lists2 = power_walks(base, 2)
        assert lists2.shape == (9, 64)
        dense = dense_from_lists(build_base(3), 9)
        assert np.array_equal(dense_from_lists(lists2, 9), dense @ dense)

    def test_row_sums(self):
        lists3 = power_walks(build_base(2), 3)
        assert lists3.shape == (4, 512)

    def test_budget(self):
        with pytest.raises(BudgetError):
            power_walks(build_base(4), 5, walk_budget=1000)


class TestBuildSketch:
    def test_certified_degree_is_astronomical(self):
        d0 = certified_degree(1.0, 0.5)
        assert d0 > 1e28

    def test_exact_fallback(self):
        sk = build_sketch(100, certified_degree(1.0, 0.5))
        assert sk.exact and sk.d == 100.0 and sk.error_bound == 0.0

    def test_n16_d8_is_base_graph(self):
        sk = build_sketch(16, 8)
        assert not sk.exact
        assert sk.power == 1 and sk.modulus == 4
        assert sk.d == 8.0
        assert np.array_equal(sk.dense(), dense_from_lists(build_base(4), 16))

    def test_budget_falls_back_to_exact(self):
        sk = build_sketch(100, 50, walk_budget=100)
        assert sk.exact

    def test_error_bound_certified_by_dense_oracle(self):
        for n, d0 in [(30, 8), (100, 8), (100, 64), (200, 64)]:
            sk = build_sketch(n, d0)
            assert not sk.exact and sk.d >= d0
            diff = (sk.d / n) * np.ones((n, n)) - sk.dense()
            measured = np.abs(np.linalg.eigvalsh(diff)).max()
            assert measured <= sk.error_bound + 1e-9

    def test_degree_saturates_to_exact(self):
        # requesting a degree at or above n is answered with the exact sketch
        sk = build_sketch(30, 64)
        assert sk.exact and sk.d == 30.0

    def test_row_sums_bounded_by_powered_degree(self):
        sk = build_sketch(30, 8)
        dense = sk.dense()
        assert dense.sum(axis=1).max() <= sk.d_tilde

    def test_validation(self):
        with pytest.raises(InputError):
            build_sketch(0, 8)
        with pytest.raises(InputError):
            build_sketch(10, 0.5)
        with pytest.raises(InputError):
            ExpanderSketch(n=4, d=2.0, error_bound=1.0, exact=False)


class TestQuadraticFormGuarantee:
    def fixed_vectors(self, n, count=100):
        gen = np.random.default_rng(2024)
        return [gen.standard_normal(n) for _ in range(count)]

    @pytest.mark.parametrize("n,d0", [(30, 8), (100, 64), (64, 8)])
    def test_sum_square_estimate(self, n, d0):
        sk = build_sketch(n, d0)
        m = sk.dense()
        for v in self.fixed_vectors(n):
            lhs = abs(v.sum() ** 2 - (n / sk.d) * (v @ m @ v))
            assert lhs <= sk.error_bound * (n / sk.d) * (v @ v) + 1e-9

    def test_exact_sketch_is_exact(self):
        n = 40
        sk = exact_sketch(n)
        m = sk.dense()
        for v in self.fixed_vectors(n, count=20):
            lhs = abs(v.sum() ** 2 - (n / sk.d) * (v @ m @ v))
            assert lhs <= 1e-9 * n * (v @ v)

    def test_is_certified(self):
        assert is_certified(exact_sketch(10), C=5.0, eps=0.1)
        sk = build_sketch(100, 8)
        # error bound 5*sqrt(2) is far above the (C=1, eps=0.5) requirement
        assert not is_certified(sk, C=1.0, eps=0.5)
