import random
from collections import Counter

import numpy as np
import pytest

from permcount.field import field_make
from permcount.kakeya import curve_for_point, kakeya_build
from permcount.oracles import hc_dp, per_ryser
from permcount.poly import hermite_interpolate, poly_eval
from permcount.reveal import EvaluatorFamily, RevealParams, reveal_batch, reveal_eval
from permcount.vec import VecField


class Monomial:
    """Test double: r = 1 evaluator of P(x) = x_0^2 x_1 (homogeneous, degree 3)."""

    def __init__(self, F, point):
        self.F, self.point = F, point

    def evaluate(self, flat):
        F = self.F
        x = [s[0] for s in flat]
        return [F.mul(F.mul(x[0], x[0]), x[1])]


def test_params():
    p = RevealParams(2, 3, 7)
    assert (p.u, p.r, p.degree) == (1, 1, 2)
    assert RevealParams(5, 2, 13).r == 3
    with pytest.raises(ValueError):
        RevealParams(2, 4, 7)
    with pytest.raises(ValueError):
        RevealParams(2, 6, 7)


def test_reveal_k1_identity():
    F = field_make(7)
    K = kakeya_build(F, 1, 3)
    fam = EvaluatorFamily(F, "per", 1, 1, K)
    params = RevealParams(1, 3, 7)
    for a in range(7):
        assert reveal_eval(fam, K, (a,), params) == a


def test_reveal_with_test_double():
    F = field_make(13)
    K = kakeya_build(F, 2, 4)
    params = RevealParams(3, 4, 13)
    rng = random.Random(4)
    for _ in range(20):
        a = (rng.randrange(13), rng.randrange(13))
        st = Counter()
        got = reveal_eval(lambda pt: Monomial(F, pt), K, a, params, st, check=True)
        assert got == F.mul(F.mul(a[0], a[0]), a[1])
        assert st["queries"] == 13


def test_interpolant_matches_curve_values():
    F = field_make(7)
    K = kakeya_build(F, 4, 3)
    params = RevealParams(2, 3, 7)
    fam = EvaluatorFamily(F, "per", 2, 1, K)
    a = (1, 2, 3, 4)
    c = curve_for_point(K, a)
    vals = [per_ryser([list(c.point_at(t)[:2]), list(c.point_at(t)[2:])], F) for t in range(7)]
    Q = hermite_interpolate(F, 1, {t: [v] if v else [] for t, v in enumerate(vals)})
    assert [poly_eval(F, Q, t) for t in range(7)] == vals
    assert Q[params.degree] == per_ryser([[1, 2], [3, 4]], F)
    assert reveal_eval(fam, K, a, params, check=True) == Q[params.degree]


def test_reveal_higher_order():
    F = field_make(13)
    params = RevealParams(3, 2, 13)
    assert params.r == 2
    K = kakeya_build(F, 9, 2, budget=0)
    rng = random.Random(7)
    for mode, oracle in (("per", per_ryser), ("hc", hc_dp)):
        fam = EvaluatorFamily(F, mode, 3, 2, K)
        for _ in range(3):
            a = tuple(rng.randrange(13) for _ in range(9))
            st = Counter()
            want = oracle([list(a[0:3]), list(a[3:6]), list(a[6:9])], F)
            assert reveal_eval(fam, K, a, params, st) == want
            assert reveal_eval(fam, K, a, params, check=True) == want
            assert st["queries"] == 13


def test_family_rejects_points_outside():
    F = field_make(7)
    K = kakeya_build(F, 4, 3)
    fam = EvaluatorFamily(F, "per", 2, 1, K)
    outside = next(pt for pt in ((x, y, 0, 0) for x in range(7) for y in range(7))
                   if pt not in K)
    with pytest.raises(ValueError):
        fam(outside)
    with pytest.raises(ValueError):
        EvaluatorFamily(F, "det", 2, 1, K)


def test_eager_family_builds_everything():
    F = field_make(7)
    K = kakeya_build(F, 1, 3)
    fam = EvaluatorFamily(F, "per", 1, 1, K, eager=True)
    assert len(fam) == len(K)


def test_mismatched_kakeya():
    F = field_make(7)
    K = kakeya_build(F, 4, 2)
    fam = EvaluatorFamily(F, "per", 2, 1, K)
    with pytest.raises(ValueError):
        reveal_eval(fam, K, (1, 2, 3, 4), RevealParams(2, 3, 7))


@pytest.mark.parametrize("p,ell,b,k", [(7, 1, 3, 2), (13, 1, 4, 3), (3, 2, 4, 2), (2, 4, 5, 3)])
def test_batch_matches_scalar(p, ell, b, k):
    F = field_make(p, ell)
    vf = VecField(F)
    params = RevealParams(k, b, F.q)
    K = kakeya_build(F, k * k, b, budget=0)
    rng = random.Random(11)
    pts = np.array([[rng.randrange(F.q) for _ in range(k * k)] for _ in range(30)])
    for mode, oracle in (("per", per_ryser), ("hc", hc_dp)):
        st = Counter()
        got = reveal_batch(vf, K, pts, params, mode, st)
        want = [oracle([[int(x) for x in row[i * k:(i + 1) * k]] for i in range(k)], F)
                for row in pts]
        assert list(got) == want
        assert st["queries"] == 30 * F.q
