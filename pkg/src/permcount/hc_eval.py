"""r-order evaluation of hc at a fixed k x k matrix A.

hc(A) = sum_sigma prod_i A[i][sigma(i)] * det((I - P_sigma) minus row/col 0),
and expanding the determinant by Leibniz gives a signed sum over pairs
(sigma, tau) with tau(0) = 0.  The DP below fills those pairs one row at a
time from the last row up.  A state (S', T') records the values already used
by tau and sigma in the processed rows; its value depends only on those rows,
so the rows that a query replaces are put first and everything after them is
precomputed.

Rows and columns are 0-indexed here; vertex 0 is the special vertex.
"""

import numpy as np

from .oracles import SeriesRing
from .per_eval import bits, masks_of_size


def suffix_step(layer, row, i, ring):
    """Process row i: sigma(i) = j and tau(i) in {i, j}."""
    add, neg, mul = ring.add, ring.neg, ring.mul
    bit_i = 1 << i
    out = {}
    k = len(row)
    for (S, T), val in layer.items():
        even_i = (S & (bit_i - 1)).bit_count() % 2 == 0
        for j in range(k):
            bj = 1 << j
            if T & bj:
                continue
            w = mul(row[j], val)
            if not S & bit_i:
                key = (S | bit_i, T | bj)
                term = w if even_i else neg(w)
                out[key] = add(out[key], term) if key in out else term
            if j and not S & bj:
                key = (S | bj, T | bj)
                term = neg(w) if (S & (bj - 1)).bit_count() % 2 == 0 else w
                out[key] = add(out[key], term) if key in out else term
    return out


def close(layer, row, ring, zero):
    """hc = sum_j row0[j] * f({1..k-1}, [k] minus {j})."""
    k = len(row)
    full_s = (1 << k) - 2
    full_t = (1 << k) - 1
    total = zero
    for j in range(k):
        val = layer.get((full_s, full_t ^ (1 << j)))
        if val is not None:
            total = ring.add(total, ring.mul(row[j], val))
    return total


def suffix_dp(A, ring, one, zero, stop=1):
    """Layer after rows k-1 down to stop of the (relabeled) matrix A."""
    layer = {(0, 0): one}
    for i in range(len(A) - 1, stop - 1, -1):
        layer = suffix_step(layer, A[i], i, ring)
    return layer


def hc_suffix(A, F):
    """hc(A) via the signed DP alone (no query); for k >= 2."""
    return close(suffix_dp(A, F, 1, 0), A[0], F, 0)


def relabel(A, order):
    return [[A[i][j] for j in order] for i in order]


class HcEvaluator:
    def __init__(self, F, A, r):
        k = len(A)
        if k < 1:
            raise ValueError("k must be >= 1")
        if not 1 <= r <= k:
            raise ValueError(f"order r = {r} outside [1, {k}]")
        self.F, self.k, self.r = F, k, r
        self.A = [list(row) for row in A]
        self.tables = {}
        if k == 1:
            return
        for s in range(r):
            for S in masks_of_size(k, s):
                order = bits(S) + [v for v in range(k) if not S >> v & 1]
                Ah = relabel(self.A, order)
                self.tables[S] = (order, suffix_dp(Ah, F, 1, 0, stop=max(s, 1)))

    @property
    def point(self):
        return tuple(x for row in self.A for x in row)

    def value(self):
        if self.k == 1:
            return self.A[0][0]
        order, layer = self.tables[0]
        return close(layer, relabel(self.A, order)[0], self.F, 0)

    def query(self, Fm):
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
        if k == 1:
            return list(Fm[0][0])
        ring = SeriesRing(F, r)
        zero = [0] * r

        def const(c):
            return [c] + [0] * (r - 1)

        out = zero
        for S, (order, layer) in self.tables.items():
            s = S.bit_count()
            cur = {key: const(v) for key, v in layer.items()}
            Bh = relabel(B, order)
            for i in range(s - 1, 0, -1):
                cur = suffix_step(cur, Bh[i], i, ring)
            row0 = Bh[0] if s else [const(x) for x in relabel(A, order)[0]]
            out = ring.add(out, close(cur, row0, ring, zero))
        return out

    def evaluate(self, flat):
        k = self.k
        return self.query([flat[i * k:(i + 1) * k] for i in range(k)])


def hc_eval_build(F, A, r):
    return HcEvaluator(F, A, r)


def hc_batch_r1(vf, mats):
    """hc at a stack of points (B, k, k) through the same signed DP."""
    mats = np.asarray(mats, dtype=np.int64)
    B, k = mats.shape[0], mats.shape[1]
    if k == 1:
        return mats[:, 0, 0].copy()
    rows = [[mats[:, i, j] for j in range(k)] for i in range(k)]
    zero = np.zeros(B, np.int64)
    layer = suffix_dp(rows, vf, np.ones(B, np.int64), zero)
    return close(layer, rows[0], vf, zero)
