"""End-to-end counting: parameters, field bootstrap, F_q counter, CRT driver."""

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import factorial, floor, gcd, log, log2, sqrt

import numpy as np
from sympy import divisors, nextprime, totient

from .field import GF, field_make
from .kakeya import KakeyaSet
from .oracles import ZZ, hc_brute, hc_dp, per_brute, per_ryser
from .reduction import faithful_batches, points_needed, reduce_instances
from .reveal import EvaluatorFamily, RevealParams, reveal_batch, reveal_eval
from .vec import VecField, vec_supported

DEFAULT_B = {"per": 10, "hc": 17}
BOOTSTRAP_B = {"per": (10, 11), "hc": (17, 18)}
EXPONENT_BOUND = {"per": 0.94, "hc": 0.97}
EXPONENT_FACTOR = {"per": 2, "hc": 3}
WORKERS_ENV = "PERMCOUNT_WORKERS"
BRUTE_MAX = 6
CLASSICAL_MAX = 24
SEARCH_LIMIT = 1 << 20


def _mode(mode):
    if mode not in DEFAULT_B:
        raise ValueError(f"mode must be 'per' or 'hc', got {mode!r}")
    return mode


def theta(b):
    return sqrt(log(1.9) / log(1 + b))


def default_k(n, b):
    return min(max(1, floor(theta(b) * sqrt(n))), n)


@dataclass(frozen=True)
class PipelineParams:
    n: int
    q: int
    mode: str
    b: int
    k: int
    strict: bool = False

    def __post_init__(self):
        _mode(self.mode)
        if (self.q - 1) % self.b:
            raise ValueError(f"q = {self.q} is not 1 mod b = {self.b}")
        if self.u < 1:
            raise ValueError(f"u = {self.u} < 1 for q = {self.q}, b = {self.b}")
        if not 1 <= self.k <= self.n:
            raise ValueError(f"k = {self.k} outside [1, {self.n}]")
        if self.strict:
            if self.b < DEFAULT_B[self.mode]:
                raise ValueError(f"strict mode needs b >= {DEFAULT_B[self.mode]}")
            if self.q < self.n * self.n + 1:
                raise ValueError(f"strict mode needs q >= n^2 + 1 = {self.n ** 2 + 1}")
        elif self.b < 2:
            raise ValueError("b must be >= 2")

    @property
    def theta(self):
        return theta(self.b)

    @property
    def u(self):
        return (self.q - 1) // self.b - 1

    @property
    def r(self):
        return -(-self.k // self.b)

    def reveal(self):
        return RevealParams(self.k, self.b, self.q)


def choose_b(q, k, mode):
    """A cofactor b >= 2 of q - 1 with u >= 1, preferring r = 1."""
    cands = [d for d in divisors(q - 1) if d >= 2 and (q - 1) // d >= 2]
    if not cands:
        return None
    b0 = DEFAULT_B[mode]
    if b0 in cands and b0 >= k:
        return b0
    wide = [d for d in cands if d >= k]
    return min(wide) if wide else max(cands)


def select_params(n, q, mode, b=None, k=None, strict=False):
    _mode(mode)
    if strict:
        if q < n * n + 1:
            raise ValueError(f"strict mode needs q >= n^2 + 1 = {n * n + 1}, got {q}")
        b = DEFAULT_B[mode] if b is None else b
    if b is None:
        b = choose_b(q, k or default_k(n, DEFAULT_B[mode]), mode)
        if b is None:
            raise ValueError(f"no valid b divides q - 1 = {q - 1}")
    if k is None:
        k = default_k(n, b)
    return PipelineParams(n, q, mode, b, k, strict)


def extension(F, ell):
    return F if ell == 1 else field_make(F.p, F.ell * ell)


def bootstrap_field(F, n, mode):
    """(ell, F_{q^ell}, b) with q^ell = 1 mod b and q^ell > n^2.

    Keeps F when a candidate b already divides q - 1; otherwise every
    candidate coprime to q gives ell = the least multiple of phi(b) with
    q^ell > n^2, and the smaller extension wins.
    """
    if isinstance(F, int):
        from .field import field_of_order
        F = field_of_order(F)
    q = F.q
    cands = BOOTSTRAP_B[_mode(mode)]
    for b in cands:
        if (q - 1) % b == 0 and q > n * n:
            return 1, F, b
    best = None
    for b in cands:
        if gcd(b, q) == 1:
            phi = int(totient(b))
            ell = phi
            while q ** ell <= n * n:
                ell += phi
            if best is None or ell < best[0]:
                best = (ell, b)
    if best is None:
        raise AssertionError("one of the candidate moduli is always coprime")
    ell, b = best
    return ell, extension(F, ell), b


def plan(F, n, mode, b=None, k=None, strict=False):
    """Pick the working field E >= F and the pipeline parameters."""
    _mode(mode)
    if strict:
        ell, E, b0 = bootstrap_field(F, n, mode)
        return E, select_params(n, E.q, mode, b if b is not None else b0, k, True)
    k0 = k if k is not None else default_k(n, b or DEFAULT_B[mode])
    need = max(points_needed(n, k0, mode), k0 * k0 + 1)
    fallback = None
    ell = 1
    while True:
        Q = F.q ** ell
        if Q >= need and Q >= 4:
            bb = b if b is not None else choose_b(Q, k0, mode)
            ok = bb is not None and (Q - 1) % bb == 0 and (Q - 1) // bb >= 2
            if ok:
                if -(-k0 // bb) == 1:
                    return extension(F, ell), PipelineParams(n, Q, mode, bb, k0)
                if fallback is None:
                    fallback = (ell, bb)
        if Q > SEARCH_LIMIT and fallback is not None:
            ell, bb = fallback
            return extension(F, ell), PipelineParams(n, F.q ** ell, mode, bb, k0)
        if ell > 64:
            raise ValueError("no usable extension field found")
        ell += 1


@lru_cache(maxsize=32)
def embedding(F, E):
    """(into, back): codes of F -> codes of E and the partial inverse."""
    if F == E or F.ell == 1:
        return None
    if E.p != F.p or E.ell % F.ell:
        raise ValueError(f"{F!r} is not a subfield of {E!r}")
    # z^e lies in the copy of F* inside E; walk z until it hits a root of F's modulus
    e = (E.q - 1) // (F.q - 1)
    root = None
    for z in range(1, E.q):
        w = E.pow(z, e)
        acc = 0
        for c in reversed(F.modulus):
            acc = E.add(E.mul(acc, w), c)
        if acc == 0:
            root = w
            break
    into = []
    for a in F.elements():
        acc = 0
        for c in reversed(F.coeffs(a)):
            acc = E.add(E.mul(acc, root), c)
        into.append(acc)
    back = {v: a for a, v in enumerate(into)}
    return tuple(into), back


def _embed(A, F, E):
    emb = embedding(F, E)
    if emb is None:
        return [list(row) for row in A]
    into = emb[0]
    return [[into[x] for x in row] for row in A]


def _project(x, F, E):
    emb = embedding(F, E)
    if emb is None:
        if F.ell == 1 and x >= F.p:
            raise AssertionError(f"result {x} does not lie in the prime field")
        return x
    if x not in emb[1]:
        raise AssertionError(f"result {x} does not lie in the base field")
    return emb[1][x]


def _chunks(stream, k, size=4096):
    ws, ms = [], []
    for w, M in stream:
        ws.append(w)
        ms.append(M)
        if len(ws) == size:
            yield np.array(ws, np.int64), np.array(ms, np.int64).reshape(-1, k, k)
            ws, ms = [], []
    if ws:
        yield np.array(ws, np.int64), np.array(ms, np.int64).reshape(-1, k, k)


def count_ff(A, F, mode, b=None, k=None, strict=False, engine="auto",
             strategy="faithful", eager=False, stats=None):
    """per(A) or hc(A) over F through reduction, Kakeya curves and reveal."""
    _mode(mode)
    n = len(A)
    if n == 0:
        if mode == "per":
            return 1
        raise ValueError("hc needs n >= 1")
    for i, row in enumerate(A):
        if len(row) != n:
            raise ValueError(f"row {i} has {len(row)} entries, expected {n}")
    stats = stats if stats is not None else Counter()
    E, params = plan(F, n, mode, b, k, strict)
    rp = params.reveal()
    k = params.k
    AE = _embed(A, F, E)
    if engine == "auto":
        engine = "batch" if params.r == 1 and vec_supported(E) else "object"
    stats["q"] = E.q
    stats["b"] = params.b
    stats["k"] = k
    stats["r"] = params.r
    total = 0
    if engine == "batch":
        if params.r != 1:
            raise ValueError("the batch engine needs r = 1")
        vf = VecField(E)
        K = KakeyaSet(E, k * k, params.b, budget=0)
        if strategy == "faithful":
            blocks = faithful_batches(AE, E, k, mode, vf=vf)
        else:
            blocks = _chunks(reduce_instances(AE, E, k, mode, strategy), k)
        for w, mats in blocks:
            vals = reveal_batch(vf, K, mats.reshape(len(w), k * k), rp, mode, stats)
            total = E.add(total, int(vf.dot(w, vals, axis=0)))
            stats["instances"] += len(w)
        stats["field_ops"] += vf.mults
    elif engine == "object":
        K = KakeyaSet(E, k * k, params.b)
        fam = EvaluatorFamily(E, mode, k, params.r, K, eager=eager, stats=stats)
        for w, M in reduce_instances(AE, E, k, mode, strategy):
            v = reveal_eval(fam, K, [x for row in M for x in row], rp, stats)
            total = E.add(total, E.mul(w, v))
            stats["instances"] += 1
    else:
        raise ValueError(f"unknown engine {engine!r}")
    return _project(total, F, E)


# -- integers -----------------------------------------------------------------

def choose_primes(C):
    """Smallest primes, in order, whose product exceeds 2C + 1."""
    if C < 1:
        raise ValueError("bound must be >= 1")
    out, prod, p = [], 1, 2
    while prod <= 2 * C + 1:
        out.append(p)
        prod *= p
        p = nextprime(p)
    return out


def crt(residues, moduli):
    x, D = 0, 1
    for r, m in zip(residues, moduli):
        t = (r - x) * pow(D, -1, m) % m
        x += D * t
        D *= m
    return x % D, D


def balanced(x, D):
    x %= D
    return x - D if x > D // 2 else x


def workers_from_env():
    val = os.environ.get(WORKERS_ENV, "").strip()
    if not val:
        return os.cpu_count() or 1
    try:
        n = int(val)
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {val!r}") from None
    if n < 1:
        raise ValueError(f"{WORKERS_ENV} must be >= 1")
    return n


def _residue(job):
    A, p, mode, kw = job
    F = field_make(p)
    return count_ff([[x % p for x in row] for row in A], F, mode, **kw)


def parallel_map(fn, jobs, workers):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, jobs))


def count_int(A, mode, workers=None, **kw):
    """Exact integer per/hc via count_ff modulo small primes and CRT.

    Residues are independent, so they run on a process pool; the result does
    not depend on the worker count.
    """
    _mode(mode)
    n = len(A)
    if n == 0:
        if mode == "per":
            return 1
        raise ValueError("hc needs n >= 1")
    M = max(abs(x) for row in A for x in row)
    if M == 0:
        return 0
    C = factorial(n) * M ** n
    primes = choose_primes(C)
    jobs = [(A, p, mode, kw) for p in primes]
    res = parallel_map(_residue, jobs, workers or workers_from_env())
    x, D = crt(res, primes)
    return balanced(x, D)


# -- analysis -----------------------------------------------------------------

def entropy(alpha):
    if alpha <= 0 or alpha >= 1:
        return 0.0
    return -alpha * log2(alpha) - (1 - alpha) * log2(1 - alpha)


def estimate_cost(n, b, mode):
    _mode(mode)
    if not 2 < b:
        raise ValueError("need 0 < 1/b < 1/2")
    H = entropy(1 / b)
    exponent = EXPONENT_FACTOR[mode] * H
    th = theta(b)
    k = default_k(n, b)
    bound = EXPONENT_BOUND[mode]
    return {
        "n": n,
        "b": b,
        "mode": mode,
        "H": H,
        "exponent": exponent,
        "bound": bound,
        "bound_holds": exponent < bound,
        "theta": th,
        "k": k,
        "kakeya_bound": (b + 1) ** (k * k + 1),
        "instances": 2 ** (n - k),
        "margin": (1 - bound) * th,
    }


# -- public entry ---------------------------------------------------------------

ALGOS = {"per": ("brute", "ryser", "subexp"), "hc": ("brute", "dp", "subexp")}


def resolve_algo(n, mode, algo):
    if algo == "auto":
        if n <= BRUTE_MAX:
            return "brute"
        if n <= CLASSICAL_MAX:
            return "ryser" if mode == "per" else "dp"
        return "subexp"
    if algo not in ALGOS[_mode(mode)]:
        raise ValueError(f"algorithm {algo!r} does not apply to {mode}")
    return algo


def count(A, mode, F=None, algo="auto", **kw):
    """per/hc of A over F (or over the integers when F is None)."""
    n = len(A)
    algo = resolve_algo(n, mode, algo)
    ring = ZZ if F is None else F
    if algo == "brute":
        return (per_brute if mode == "per" else hc_brute)(A, ring)
    if algo == "ryser":
        return per_ryser(A, ring)
    if algo == "dp":
        return hc_dp(A, ring)
    if F is None:
        return count_int(A, mode, **kw)
    return count_ff(A, F, mode, **kw)


