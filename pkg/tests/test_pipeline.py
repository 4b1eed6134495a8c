import random
from collections import Counter
from math import isclose, log, prod, sqrt

import pytest
from hypothesis import given, strategies as st
from sympy import isprime, primerange

from permcount.field import field_make
from permcount.oracles import hc_dp, hc_int_oracle, per_int_oracle, per_ryser
from permcount.pipeline import (
    PipelineParams, balanced, bootstrap_field, choose_primes, count, count_ff, count_int, crt,
    default_k, embedding, entropy, estimate_cost, plan, resolve_algo, select_params, theta,
    workers_from_env,
)

from conftest import rand_matrix

ORACLE = {"per": per_ryser, "hc": hc_dp}

NEG_PER = [[306319, -464293, 555640, -248097, 667641, 447971, 976461],
           [764776, 551679, 367409, 934255, 111574, -939172, 762337],
           [-23519, 627303, 978362, -477699, 360998, -891256, 889325],
           [-671059, -762590, -220293, -16291, 821262, -482900, -201493],
           [140349, -786145, 203641, -477116, -972498, 533403, -545485],
           [-144046, -413883, -618160, 921715, 819193, 605842, -183291],
           [-665286, 597873, 671738, -849149, -708984, 295885, 294891]]
NEG_HC = [[-67112, -734293, -722671, -996278, 827468, -988858, -560739],
          [622343, -548104, -652174, 829571, -650857, -393284, -342226],
          [-582899, 130833, 837354, 421513, 312251, -570547, -619014],
          [973369, 448381, -587115, 874312, -196323, -373395, -954764],
          [-242530, -129878, -651965, 962499, -694441, -446747, -863393],
          [-304051, -368005, 714212, 264813, 229227, -992906, 249858],
          [421731, 484104, -291379, -861541, -349972, -254775, 716556]]


def test_theta_and_k_n100():
    assert isclose(theta(10), sqrt(log(1.9) / log(11)))
    assert round(theta(10), 3) == 0.517
    assert default_k(100, 10) == 5
    assert select_params(100, 101, "per", b=10).k == 5


def test_select_params_small():
    p = select_params(4, 7, "per", b=3)
    assert (p.u, p.r) == (1, 1)
    assert p.k == max(1, int(theta(3) * 2)) == 1


def test_strict_rejects_small_field():
    with pytest.raises(ValueError):
        select_params(4, 16, "per", strict=True)
    with pytest.raises(ValueError):
        PipelineParams(4, 31, "per", 5, 1, strict=True)
    assert select_params(4, 31, "per", b=10, strict=True).u == 2


def test_select_params_errors():
    with pytest.raises(ValueError):
        select_params(4, 7, "per", b=4)
    with pytest.raises(ValueError):
        select_params(4, 3, "per")  # q - 1 = 2 leaves no b with u >= 1
    with pytest.raises(ValueError):
        select_params(4, 7, "det")


@given(st.integers(1, 40), st.sampled_from([7, 11, 13, 16, 25, 31, 37, 49, 64, 81, 101, 128]),
       st.sampled_from(["per", "hc"]))
def test_params_invariants(n, q, mode):
    try:
        p = select_params(n, q, mode)
    except ValueError:
        return
    assert (q - 1) % p.b == 0 and p.u >= 1 and p.r >= 1 and 1 <= p.k <= n
    assert p.u == (q - 1) // p.b - 1 and p.r == -(-p.k // p.b)


def test_bootstrap_examples():
    ell, E, b = bootstrap_field(field_make(2), 4, "per")
    assert (ell, b, E.q) == (10, 11, 1024)
    ell, E, b = bootstrap_field(field_make(101), 10, "per")
    assert (ell, b, E.q) == (1, 10, 101)
    ell, E, b = bootstrap_field(field_make(17), 4, "hc")
    assert (ell, b, E.q) == (6, 18, 17 ** 6)


@given(st.sampled_from([2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27]),
       st.integers(1, 12), st.sampled_from(["per", "hc"]))
def test_bootstrap_invariants(q, n, mode):
    from permcount.field import field_of_order
    ell, E, b = bootstrap_field(field_of_order(q), n, mode)
    assert E.q == q ** ell and (E.q - 1) % b == 0 and E.q >= n * n + 1


def test_embedding_is_a_homomorphism():
    F, E = field_make(2, 2), field_make(2, 4)
    into, back = embedding(F, E)
    for a in F.elements():
        for c in F.elements():
            assert into[F.mul(a, c)] == E.mul(into[a], into[c])
            assert into[F.add(a, c)] == E.add(into[a], into[c])
    assert all(back[into[a]] == a for a in F.elements())


def test_choose_primes_examples():
    assert choose_primes(100) == [2, 3, 5, 7]
    assert choose_primes(1) == [2, 3]
    assert prod(primerange(2, 17)) == 30030 > 2
    with pytest.raises(ValueError):
        choose_primes(0)


@given(st.integers(1, 10 ** 60))
def test_choose_primes_properties(C):
    ps = choose_primes(C)
    assert prod(ps) > 2 * C + 1 and prod(ps[:-1]) <= 2 * C + 1
    assert all(isprime(p) for p in ps) and ps == sorted(set(ps))
    # the greedy set stays under 16 log2 of the modulus
    assert ps[-1] <= 16 * max(1, (2 * C + 2).bit_length())


@given(st.integers(-10 ** 30, 10 ** 30))
def test_crt_balanced_lift(x):
    ps = choose_primes(10 ** 30)
    y, D = crt([x % p for p in ps], ps)
    assert balanced(y, D) == x


def test_entropy_and_cost():
    rep = estimate_cost(100, 10, "per")
    assert rep["exponent"] < 0.94 and isclose(rep["exponent"], 2 * entropy(0.1))
    assert rep["k"] == 5 and rep["instances"] == 2 ** 95
    assert rep["kakeya_bound"] == 11 ** 26
    assert isclose(rep["margin"], 0.06 * theta(10))
    rep = estimate_cost(100, 17, "hc")
    assert rep["exponent"] < 0.97 and rep["bound_holds"]
    assert isclose(rep["margin"], 0.03 * theta(17))
    assert entropy(1e-12) < 1e-10 and entropy(0.5) == 1.0
    with pytest.raises(ValueError):
        estimate_cost(10, 2, "per")


@pytest.mark.parametrize("p,ell", [(101, 1), (2, 1), (3, 2), (7, 1), (5, 1)])
def test_count_ff_default(p, ell, rng):
    F = field_make(p, ell)
    for mode in ("per", "hc"):
        for n in range(1, 8):
            A = rand_matrix(rng, F, n)
            assert count_ff(A, F, mode) == ORACLE[mode](A, F)


@pytest.mark.parametrize("kw", [
    {"k": 3}, {"k": 2, "engine": "object"}, {"k": 3, "strategy": "laplace"},
    {"k": 4, "b": 3, "engine": "object"}, {"k": 2, "eager": True, "engine": "object"},
], ids=str)
def test_count_ff_variants(kw, rng):
    F = field_make(13)
    for mode in ("per", "hc"):
        A = rand_matrix(rng, F, 5)
        st = Counter()
        assert count_ff(A, F, mode, stats=st, **kw) == ORACLE[mode](A, F)
        assert st["queries"] == st["q"] * st["instances"]


@pytest.mark.parametrize("p,ell,n", [(2, 1, 4), (103, 1, 6), (13, 1, 5), (2, 2, 3)])
def test_count_ff_strict(p, ell, n, rng):
    F = field_make(p, ell)
    for mode in ("per", "hc"):
        _, E, b = bootstrap_field(F, n, mode)
        if E.q > 1 << 20:
            continue  # a valid strict field, but too large to run here
        A = rand_matrix(rng, F, n)
        st = Counter()
        assert count_ff(A, F, mode, strict=True, stats=st) == ORACLE[mode](A, F)
        assert st["q"] == E.q and st["b"] == b >= (10 if mode == "per" else 17)


def test_count_ff_identity():
    F = field_make(101)
    for n in range(2, 8):
        I = [[int(i == j) for j in range(n)] for i in range(n)]
        assert count_ff(I, F, "per") == 1 and count_ff(I, F, "hc") == 0


def test_count_ff_edge_cases():
    F = field_make(7)
    assert count_ff([], F, "per") == 1
    assert count_ff([[5]], F, "hc") == 5
    with pytest.raises(ValueError):
        count_ff([[1, 2], [3]], F, "per")
    with pytest.raises(ValueError):
        count_ff([[1, 2], [3, 4]], F, "per", engine="gpu")


def test_plan_picks_order_one():
    E, p = plan(field_make(2), 12, "per")
    assert p.r == 1 and E.q >= 23 and (E.q - 1) % p.b == 0


def test_count_int_examples():
    assert count_int([[1, 1], [1, 1]], "per") == 2
    assert count_int([[0, 0], [0, 0]], "hc") == 0
    assert count_int([[1] * 4] * 4, "hc") == 6
    assert count_int([], "per") == 1


def test_count_int_negative_frozen():
    assert count_int(NEG_PER, "per") == -691684059462501580180631242344772389337386
    assert count_int(NEG_HC, "hc") == -136771226774321189693546723825187938734662
    assert per_int_oracle(NEG_PER) == -691684059462501580180631242344772389337386
    assert hc_int_oracle(NEG_HC) == -136771226774321189693546723825187938734662


def test_count_int_random(rng):
    for n in (3, 5, 8):
        A = [[rng.randint(-10 ** 6, 10 ** 6) for _ in range(n)] for _ in range(n)]
        assert count_int(A, "per") == per_int_oracle(A)
    A = [[rng.randint(0, 1) for _ in range(7)] for _ in range(7)]
    assert count_int(A, "hc") == hc_int_oracle(A)


def test_count_int_workers_agree(rng):
    A = [[rng.randint(-50, 50) for _ in range(6)] for _ in range(6)]
    assert count_int(A, "hc", workers=1) == count_int(A, "hc", workers=2) == hc_int_oracle(A)


def test_workers_env(monkeypatch):
    monkeypatch.setenv("PERMCOUNT_WORKERS", "3")
    assert workers_from_env() == 3
    monkeypatch.setenv("PERMCOUNT_WORKERS", "0")
    with pytest.raises(ValueError):
        workers_from_env()
    monkeypatch.setenv("PERMCOUNT_WORKERS", "many")
    with pytest.raises(ValueError):
        workers_from_env()
    monkeypatch.delenv("PERMCOUNT_WORKERS")
    assert workers_from_env() >= 1


def test_public_count(rng):
    F = field_make(101)
    assert resolve_algo(5, "per", "auto") == "brute"
    assert resolve_algo(20, "hc", "auto") == "dp"
    assert resolve_algo(30, "per", "auto") == "subexp"
    with pytest.raises(ValueError):
        resolve_algo(5, "hc", "ryser")
    A = rand_matrix(rng, F, 7)
    for algo in ("auto", "brute", "ryser", "subexp"):
        assert count(A, "per", F, algo) == per_ryser(A, F)
    for algo in ("auto", "brute", "dp", "subexp"):
        assert count(A, "hc", F, algo) == hc_dp(A, F)
    B = [[rng.randint(-9, 9) for _ in range(6)] for _ in range(6)]
    assert count(B, "per", algo="subexp") == count(B, "per") == per_int_oracle(B)
