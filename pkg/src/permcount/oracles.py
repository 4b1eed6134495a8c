"""Reference algorithms for per and hc.

All functions take a square matrix as a list of rows plus a ring object with
``zero, one, add, sub, mul, neg``.  A GF context is such a ring; so are
``ZZ`` (Python ints) and ``SeriesRing(F, r)`` (F[t]/t^r).
"""

from functools import lru_cache
from itertools import islice, permutations

import numpy as np

from .field import GF, field_make
from .poly import series_add, series_mul, series_sub
from .vec import VecField, vec_supported

BRUTE_CAP = 10
INT_CAP = 20


class IntegerRing:
    zero = 0
    one = 1

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    def __repr__(self):
        return "ZZ"


ZZ = IntegerRing()


class CountingRing:
    """Delegates to a ring and counts its multiplications."""

    def __init__(self, ring):
        self.ring = ring
        self.zero, self.one = ring.zero, ring.one
        self.add, self.sub, self.neg = ring.add, ring.sub, ring.neg
        self.mults = 0

    def mul(self, a, b):
        self.mults += 1
        return self.ring.mul(a, b)


class SeriesRing:
    """F[t]/t^r with elements as length-r lists."""

    def __init__(self, F, r):
        if r < 1:
            raise ValueError("order must be >= 1")
        self.F, self.r = F, r
        self.zero = [0] * r
        self.one = [1] + [0] * (r - 1)

    def add(self, a, b):
        return series_add(self.F, a, b)

    def sub(self, a, b):
        return series_sub(self.F, a, b)

    def mul(self, a, b):
        return series_mul(self.F, a, b)

    def neg(self, a):
        return [self.F.neg(x) for x in a]

    def const(self, c):
        return [c] + [0] * (self.r - 1)


def _square(A):
    n = len(A)
    for i, row in enumerate(A):
        if len(row) != n:
            raise ValueError(f"row {i} has {len(row)} entries, expected {n}")
    return n


def _is_small_prime(ring):
    return isinstance(ring, GF) and ring.ell == 1


# -- permanent ------------------------------------------------------------------

def per_brute(A, ring=ZZ, cap=BRUTE_CAP):
    n = _square(A)
    if n > cap:
        raise ValueError(f"brute force capped at n = {cap}")
    if n == 0:
        return ring.one
    if isinstance(ring, GF) and vec_supported(ring):
        return _brute_vec(A, ring, False)
    add, mul = ring.add, ring.mul
    total = ring.zero
    for sigma in permutations(range(n)):
        prod = A[0][sigma[0]]
        for i in range(1, n):
            prod = mul(prod, A[i][sigma[i]])
        total = add(total, prod)
    return total


def _cycles_from_zero(n):
    """All single-cycle permutations of range(n), as image tuples."""
    for rest in permutations(range(1, n)):
        cyc = (0,) + rest
        sigma = [0] * n
        for i in range(n):
            sigma[cyc[i]] = cyc[(i + 1) % n]
        yield tuple(sigma)


@lru_cache(maxsize=None)
def _perm_table(n, cyclic):
    gen = _cycles_from_zero(n) if cyclic else permutations(range(n))
    return np.array(list(gen), dtype=np.int64).reshape(-1, n)


def _perm_blocks(n, cyclic, chunk=40320):
    if n <= 8:
        yield _perm_table(n, cyclic)
        return
    gen = _cycles_from_zero(n) if cyclic else permutations(range(n))
    while True:
        block = np.array(list(islice(gen, chunk)), dtype=np.int64)
        if block.size == 0:
            return
        yield block


def _brute_vec(A, F, cyclic):
    vf = VecField(F)
    M = vf.asarray(A)
    n = M.shape[0]
    total = 0
    for block in _perm_blocks(n, cyclic):
        prod = M[0, block[:, 0]]
        for i in range(1, n):
            prod = vf.mul(prod, M[i, block[:, i]])
        total = F.add(total, int(vf.sum(prod, axis=0)))
    return total


def brute_batch(vf, mats, cyclic=False):
    """per (or hc with cyclic=True) of a stack (B, k, k) by direct summation."""
    mats = np.asarray(mats, dtype=np.int64)
    k = mats.shape[1]
    total = np.zeros(mats.shape[0], np.int64)
    if cyclic and k == 1:
        return mats[:, 0, 0].copy()
    for sigma in _perm_table(k, cyclic):
        prod = mats[:, 0, sigma[0]]
        for i in range(1, k):
            prod = vf.mul(prod, mats[:, i, sigma[i]])
        total = vf.add(total, prod)
    return total


def per_ryser(A, ring=ZZ):
    """Ryser's formula, subsets visited in Gray-code order."""
    n = _square(A)
    if n == 0:
        return ring.one
    if _is_small_prime(ring) or ring is ZZ:
        return _ryser_int(A, ring.p if ring is not ZZ else None)
    add, sub, mul, neg = ring.add, ring.sub, ring.mul, ring.neg
    sums = [ring.zero] * n
    total = ring.zero
    members = 0
    gray = 0
    for step in range(1, 1 << n):
        j = (step & -step).bit_length() - 1
        gray ^= 1 << j
        if gray >> j & 1:
            members += 1
            sums = [add(s, A[i][j]) for i, s in enumerate(sums)]
        else:
            members -= 1
            sums = [sub(s, A[i][j]) for i, s in enumerate(sums)]
        prod = sums[0]
        for s in sums[1:]:
            prod = mul(prod, s)
        total = sub(total, prod) if (n - members) & 1 else add(total, prod)
    return total


def _ryser_int(A, p):
    n = len(A)
    cols = [[A[i][j] for i in range(n)] for j in range(n)]
    sums = [0] * n
    total = 0
    members = 0
    gray = 0
    for step in range(1, 1 << n):
        j = (step & -step).bit_length() - 1
        gray ^= 1 << j
        col = cols[j]
        if gray >> j & 1:
            members += 1
            sums = [s + c for s, c in zip(sums, col)]
        else:
            members -= 1
            sums = [s - c for s, c in zip(sums, col)]
        prod = 1
        for s in sums:
            prod *= s
            if p is not None:
                prod %= p
        if (n - members) & 1:
            total -= prod
        else:
            total += prod
    return total if p is None else total % p


def ryser_batch(vf, mats):
    """Ryser on a stack of k x k matrices (B, k, k) -> (B,)."""
    mats = np.asarray(mats, dtype=np.int64)
    B, k = mats.shape[0], mats.shape[1]
    if k == 0:
        return np.ones(B, np.int64)
    out = np.empty(B, np.int64)
    step = max(1, (1 << 21) // (k << k))
    size = np.array([bin(z).count("1") for z in range(1 << k)])
    odd = (k - size) % 2 == 1
    for lo in range(0, B, step):
        X = mats[lo:lo + step]
        S = np.zeros(X.shape[:2] + (1 << k,), np.int64)
        for j in range(k):
            h = 1 << j
            S[:, :, h:2 * h] = vf.add(S[:, :, :h], X[:, :, j:j + 1])
        prod = S[:, 0, :]
        for i in range(1, k):
            prod = vf.mul(prod, S[:, i, :])
        plus = vf.sum(prod[:, ~odd], axis=-1)
        minus = vf.sum(prod[:, odd], axis=-1)
        out[lo:lo + step] = vf.sub(plus, minus)
    return out


def per_oracle(A, ring=ZZ, strategy="ryser", cap=BRUTE_CAP):
    if strategy == "brute":
        return per_brute(A, ring, cap)
    if strategy == "ryser":
        return per_ryser(A, ring)
    raise ValueError(f"unknown strategy {strategy!r}")


def per_int_oracle(A, cap=INT_CAP):
    n = _square(A)
    if n > cap:
        raise ValueError(f"integer oracle capped at n = {cap}")
    return per_ryser(A, ZZ)


# -- Hamiltonian cycles ---------------------------------------------------------

def hc_brute(A, ring=ZZ, cap=BRUTE_CAP):
    n = _square(A)
    if n < 1:
        raise ValueError("hc needs n >= 1")
    if n > cap:
        raise ValueError(f"brute force capped at n = {cap}")
    if isinstance(ring, GF) and vec_supported(ring):
        return _brute_vec(A, ring, True)
    add, mul = ring.add, ring.mul
    total = ring.zero
    for sigma in _cycles_from_zero(n):
        prod = A[0][sigma[0]]
        for i in range(1, n):
            prod = mul(prod, A[i][sigma[i]])
        total = add(total, prod)
    return total


def hc_dp(A, ring=ZZ):
    """Subset DP over walks from vertex 0 that close into a tour.

    dp[mask][v] = weighted sum of simple paths 0 -> ... -> v visiting exactly
    the vertices of mask (mask always contains 0).
    """
    n = _square(A)
    if n < 1:
        raise ValueError("hc needs n >= 1")
    if n == 1:
        return A[0][0]
    p = ring.p if _is_small_prime(ring) else None
    if p is not None or ring is ZZ:
        add = (lambda a, b: (a + b) % p) if p else (lambda a, b: a + b)
        mul = (lambda a, b: a * b % p) if p else (lambda a, b: a * b)
        zero = 0
    else:
        add, mul, zero = ring.add, ring.mul, ring.zero
    full = (1 << n) - 1
    layer = {1 | (1 << v): {v: A[0][v]} for v in range(1, n)}
    for _ in range(n - 2):
        nxt = {}
        for mask, ends in layer.items():
            for v, val in ends.items():
                row = A[v]
                for w in range(1, n):
                    if mask >> w & 1:
                        continue
                    m2 = mask | (1 << w)
                    slot = nxt.setdefault(m2, {})
                    term = mul(val, row[w])
                    slot[w] = add(slot[w], term) if w in slot else term
        layer = nxt
    total = zero
    for v, val in layer.get(full, {}).items():
        total = add(total, mul(val, A[v][0]))
    return total


def hc_oracle(A, ring=ZZ, strategy="dp", cap=BRUTE_CAP):
    if strategy == "brute":
        return hc_brute(A, ring, cap)
    if strategy == "dp":
        return hc_dp(A, ring)
    raise ValueError(f"unknown strategy {strategy!r}")


def hc_int_oracle(A, cap=INT_CAP):
    n = _square(A)
    if n > cap:
        raise ValueError(f"integer oracle capped at n = {cap}")
    return hc_dp(A, ZZ)


# -- determinant characterization -----------------------------------------------

def det(M, F):
    """Determinant over the field F by Gaussian elimination."""
    n = _square(M)
    M = [list(row) for row in M]
    sign = False
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            sign = not sign
        d = F.mul(d, M[c][c])
        inv = F.inv(M[c][c])
        for i in range(c + 1, n):
            f = M[i][c]
            if f:
                f = F.mul(f, inv)
                M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], M[c])]
    return F.neg(d) if sign else d


def cycle_count(sigma):
    seen = [False] * len(sigma)
    c = 0
    for i in range(len(sigma)):
        if not seen[i]:
            c += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = sigma[j]
    return c


def _next_prime_above(n):
    from sympy import nextprime
    return nextprime(n)


def ham_indicator_det(sigma, F=None):
    """det of (I - P_sigma) with row and column 0 removed; 1 iff one cycle."""
    n = len(sigma)
    if sorted(sigma) != list(range(n)):
        raise ValueError("not a permutation")
    if n < 1:
        raise ValueError("empty permutation")
    if F is None:
        F = field_make(_next_prime_above(n))
    M = [[0] * (n - 1) for _ in range(n - 1)]
    for i in range(1, n):
        M[i - 1][i - 1] = 1
        j = sigma[i]
        if j:
            M[i - 1][j - 1] = F.sub(M[i - 1][j - 1], 1)
    d = det(M, F)
    if d not in (0, 1):
        raise AssertionError(f"minor determinant {d} outside {{0, 1}}")
    return d


def leibniz_hc(A, F):
    """sum_sigma prod A[i][sigma i] * det-minor(sigma), brute force."""
    n = _square(A)
    total = 0
    for sigma in permutations(range(n)):
        if ham_indicator_det(sigma, F if F.q > n else None):
            prod = 1
            for i in range(n):
                prod = F.mul(prod, A[i][sigma[i]])
            total = F.add(total, prod)
    return total
