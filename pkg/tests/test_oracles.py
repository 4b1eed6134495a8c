import random
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from permcount.field import field_make
from permcount.oracles import (
    ZZ, CountingRing, brute_batch, cycle_count, det, ham_indicator_det, hc_brute, hc_dp,
    hc_int_oracle, hc_oracle, leibniz_hc, per_brute, per_int_oracle, per_oracle, per_ryser,
    ryser_batch,
)
from permcount.vec import VecField

from conftest import rand_matrix

A5 = [[-4, 3, 2, 4, -2], [-1, -5, 5, -4, 1], [2, -2, -3, -1, 4], [5, 1, 0, 2, -4],
      [-3, 4, 3, 5, -1]]
A8 = [[(i * i + 3 * j + i * j) % 7 - 3 for j in range(8)] for i in range(8)]
A6 = [[(5 * i + 9 * j + i * j * j) % 101 for j in range(6)] for i in range(6)]


def test_small_examples():
    assert per_oracle([[1, 2], [3, 4]]) == 10
    assert per_oracle([[1, 2], [3, 4]], strategy="brute") == 10
    assert hc_oracle([[1] * 4] * 4) == 6 and hc_oracle([[1] * 4] * 4, strategy="brute") == 6
    assert hc_oracle([[2, 3], [5, 7]]) == 15
    assert per_int_oracle([[1, 1], [1, 1]]) == 2
    assert per_int_oracle([[1] * 10] * 10) == 3628800
    assert hc_int_oracle([[1] * 5] * 5) == 24


def test_identity():
    for n in range(1, 7):
        I = [[int(i == j) for j in range(n)] for i in range(n)]
        for F in (field_make(2), field_make(3, 2), ZZ):
            assert per_ryser(I, F) == 1 and per_brute(I, F) == 1
            assert hc_dp(I, F) == (1 if n == 1 else 0)


def test_conventions():
    assert per_oracle([]) == 1
    assert hc_oracle([[5]]) == 5
    with pytest.raises(ValueError):
        per_brute([[1] * 11] * 11)
    with pytest.raises(ValueError):
        hc_dp([])
    with pytest.raises(ValueError):
        per_ryser([[1, 2], [3]])


def test_frozen_integer_values():
    assert per_ryser(A5) == -1163 and hc_dp(A5) == -149
    assert per_ryser(A8) == 10880 and hc_dp(A8) == 5526
    assert per_brute(A8) == 10880 and hc_brute(A8) == 5526


def test_frozen_field_values():
    F = field_make(101)
    assert per_ryser(A6, F) == 26 and hc_dp(A6, F) == 37
    F9 = field_make(3, 2)
    B = [[(i + 2 * j + i * j) % 9 for j in range(4)] for i in range(4)]
    assert per_ryser(B, F9) == 3 and hc_dp(B, F9) == 5 and leibniz_hc(B, F9) == 5
    F16 = field_make(2, 4)
    B = [[(i * 5 + 3 * j + i * j) % 16 for j in range(5)] for i in range(5)]
    assert per_ryser(B, F16) == 2 and hc_dp(B, F16) == 10


def test_cross_strategy(small_field, rng):
    F = small_field
    for _ in range(30):
        n = rng.randint(1, 7)
        A = rand_matrix(rng, F, n)
        assert per_brute(A, F) == per_ryser(A, F)
        assert hc_brute(A, F) == hc_dp(A, F)


def test_generic_ring_paths_agree(rng):
    F = field_make(13)
    for _ in range(10):
        A = rand_matrix(rng, F, 5)
        c = CountingRing(F)
        assert per_ryser(A, c) == per_ryser(A, F) and c.mults > 0
        assert hc_dp(A, CountingRing(F)) == hc_dp(A, F)
        assert per_brute(A, CountingRing(F)) == per_brute(A, F)


@pytest.mark.parametrize("p,ell", [(19, 1), (2, 4), (3, 2)])
def test_batches(p, ell, rng):
    F = field_make(p, ell)
    vf = VecField(F)
    for k in range(1, 6):
        mats = [rand_matrix(rng, F, k) for _ in range(20)]
        arr = np.array(mats)
        assert list(ryser_batch(vf, arr)) == [per_ryser(A, F) for A in mats]
        assert list(brute_batch(vf, arr)) == [per_brute(A, F) for A in mats]
        assert list(brute_batch(vf, arr, cyclic=True)) == [hc_dp(A, F) for A in mats]


def test_ham_indicator_examples():
    assert ham_indicator_det((0, 1, 2)) == 0
    assert ham_indicator_det((1, 2, 0)) == 1
    with pytest.raises(ValueError):
        ham_indicator_det((0, 0, 1))


def test_ham_indicator_exhaustive_n5():
    for n in range(2, 6):
        for sigma in permutations(range(n)):
            assert ham_indicator_det(sigma) == int(cycle_count(sigma) == 1)


def test_det_small():
    F = field_make(7)
    assert det([[1, 2], [3, 4]], F) == F.from_int(-2)
    assert det([[0, 1], [1, 0]], F) == F.neg(1)


ints = st.integers(-20, 20)


@given(st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(ints, min_size=n, max_size=n), min_size=n, max_size=n)),
    st.integers(-5, 5))
def test_homogeneity(A, lam):
    n = len(A)
    B = [[lam * x for x in row] for row in A]
    assert per_ryser(B) == lam ** n * per_ryser(A)
    assert hc_dp(B) == lam ** n * hc_dp(A)


@given(st.integers(2, 6).flatmap(
    lambda n: st.tuples(
        st.lists(st.lists(ints, min_size=n, max_size=n), min_size=n, max_size=n),
        st.lists(ints, min_size=n, max_size=n), st.lists(ints, min_size=n, max_size=n),
        st.integers(0, n - 1))))
def test_hc_row_multilinear(data):
    A, u, v, i = data
    def with_row(row):
        return [row if j == i else A[j] for j in range(len(A))]
    s = [x + y for x, y in zip(u, v)]
    assert hc_dp(with_row(s)) == hc_dp(with_row(u)) + hc_dp(with_row(v))


@given(st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 9), min_size=n, max_size=n),
                       min_size=n, max_size=n)))
def test_hc_at_most_per_nonneg(A):
    assert 0 <= hc_dp(A) <= per_ryser(A)


@given(st.integers(1, 6).flatmap(
    lambda n: st.tuples(st.lists(st.lists(ints, min_size=n, max_size=n), min_size=n,
                                 max_size=n), st.permutations(list(range(n))))))
def test_relabel_invariance(data):
    A, pi = data
    B = [[A[pi[i]][pi[j]] for j in range(len(A))] for i in range(len(A))]
    assert hc_dp(B) == hc_dp(A) and per_ryser(B) == per_ryser(A)


def test_big_integer_oracle_matches_brute():
    rng = random.Random(8)
    A = [[rng.randint(-1000, 1000) for _ in range(8)] for _ in range(8)]
    assert per_int_oracle(A) == per_brute(A)
    assert hc_int_oracle(A) == hc_brute(A)
