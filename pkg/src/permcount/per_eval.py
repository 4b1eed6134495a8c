"""r-order evaluation of the permanent at a fixed k x k matrix A.

per(A + B) = sum over |S| = |T| of per(B_{S,T}) * per(A with rows S and
columns T removed).  When every entry of B is divisible by t only |S| < r
survives mod t^r, so the minors g_{S,T} of A are precomputed once and a query
only runs the small f(S,T) = per(B_{S,T}) recursion in F[t]/t^r.
"""

from itertools import combinations
from math import comb

from .oracles import per_ryser, ryser_batch
from .poly import series_add, series_mul, series_scale


def masks_of_size(k, s):
    return [sum(1 << i for i in c) for c in combinations(range(k), s)]


def bits(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def minor(A, rows_out, cols_out):
    rows = [i for i in range(len(A)) if not rows_out >> i & 1]
    cols = [j for j in range(len(A)) if not cols_out >> j & 1]
    return [[A[i][j] for j in cols] for i in rows]


def table_size(k, r):
    return sum(comb(k, j) ** 2 for j in range(r))


def query_mults(k, r):
    """Series products in one query: the f recursion plus the final sum."""
    dp = sum(comb(k, j) ** 2 * j for j in range(1, r))
    return dp + table_size(k, r)


class PerEvaluator:
    def __init__(self, F, A, r, pivot="min"):
        k = len(A)
        if not 1 <= r <= k:
            raise ValueError(f"order r = {r} outside [1, {k}]")
        if pivot not in ("min", "max"):
            raise ValueError("pivot must be 'min' or 'max'")
        self.F, self.k, self.r, self.pivot = F, k, r, pivot
        self.A = [list(row) for row in A]
        self.g_table = {}
        for s in range(r):
            for S in masks_of_size(k, s):
                for T in masks_of_size(k, s):
                    self.g_table[(S, T)] = per_ryser(minor(self.A, S, T), F)
        self.last_query_mults = 0

    @property
    def point(self):
        return tuple(x for row in self.A for x in row)

    def query(self, Fm):
        """per(Fm) mod t^r for a k x k matrix of order-r series with Fm(0) = A."""
        F, k, r, A = self.F, self.k, self.r, self.A
        if len(Fm) != k or any(len(row) != k for row in Fm):
            raise ValueError("query matrix has the wrong shape")
        B = [[None] * k for _ in range(k)]
        for i in range(k):
            for j in range(k):
                s = Fm[i][j]
                if len(s) != r:
                    raise ValueError(f"entry ({i},{j}) has order {len(s)}, expected {r}")
                if s[0] != A[i][j]:
                    raise ValueError(f"constant term mismatch at ({i},{j})")
                B[i][j] = [0] + list(s[1:])
        zero = [0] * r
        f = {(0, 0): [1] + [0] * (r - 1)}
        mults = 0
        layer = f
        for s in range(1, r):
            nxt = {}
            for S in masks_of_size(k, s):
                rows = bits(S)
                piv = rows[0] if self.pivot == "min" else rows[-1]
                S0 = S & ~(1 << piv)
                for T in masks_of_size(k, s):
                    acc = zero
                    for j in bits(T):
                        prev = layer[(S0, T & ~(1 << j))]
                        acc = series_add(F, acc, series_mul(F, B[piv][j], prev))
                        mults += 1
                    nxt[(S, T)] = acc
            f.update(nxt)
            layer = nxt
        out = zero
        for key, g in self.g_table.items():
            out = series_add(F, out, series_scale(F, f[key], g))
            mults += 1
        self.last_query_mults = mults
        return out

    def evaluate(self, flat):
        """Query with the m = k^2 series listed row-major."""
        k = self.k
        return self.query([flat[i * k:(i + 1) * k] for i in range(k)])


def per_eval_build(F, A, r, pivot="min"):
    return PerEvaluator(F, A, r, pivot)


def per_batch_r1(vf, mats):
    """Order-1 evaluation at a stack of points: just per(A) for each."""
    return ryser_batch(vf, mats)

