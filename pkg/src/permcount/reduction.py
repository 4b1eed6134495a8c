"""Self-reduction of an n x n per/hc instance to k x k instances.

Vertices 0..k-1 are "special", the d = n - k others are not.  A cycle cover
splits into paths between specials (through non-specials) plus cycles that
avoid the specials.  Mark every visit of a non-special vertex y with x_y:

  W(X) = A_SS + A_SN X (I - A_NN X)^{-1} A_NS      (walks between specials)

Then per(A) = [prod_y x_y] per(W(X)) / det(I - X A_NN) (the squarefree part of
1/det(I - X M) is sum_Z per(M_ZZ) x^Z), and hc(A) = [prod_y x_y] hc(W(X)).
Inclusion-exclusion over the visited set Y turns "each y exactly once" into
a univariate extraction:

  P(A) = sum_Y (-1)^(d - |Y|) [x^d] G_Y(x),

with G_Y built from A restricted to S u Y and X = x*I.  [x^d] G_Y is a fixed
linear combination of G_Y at deg(G_Y) + 1 points, and each value G_Y(x_l) is
per/hc of one k x k matrix (for per the 1/det factor scales row 0).  This is
2^d * ((k+1)d + 1) instances for per and 2^d * (kd + 1) for hc, so at most
2^(n-k) * n^2.
"""

from functools import lru_cache

import numpy as np

from .poly import poly_mul
from .vec import VecField, vec_supported

OVERHEAD_EXPONENT = 2
STRATEGIES = ("faithful", "laplace")


def _check(n, k, target):
    if target not in ("per", "hc"):
        raise ValueError(f"unknown target {target!r}")
    if not 1 <= k <= n:
        raise ValueError(f"k = {k} outside [1, {n}]")


def points_needed(n, k, target):
    _check(n, k, target)
    d = n - k
    if d == 0:
        return 1
    return (k + 1) * d + 1 if target == "per" else k * d + 1


def instance_count(n, k, target, strategy="faithful"):
    _check(n, k, target)
    if strategy == "laplace":
        out = 1
        top = n if target == "per" else n - 1
        bottom = k if target == "per" else max(k - 1, 0)
        for v in range(bottom + 1, top + 1):
            out *= v
        return out
    if n == k:
        return 1
    return (1 << (n - k)) * points_needed(n, k, target)


# -- generic ring helpers (scalars in GF, or numpy batches in VecField) ------------

def _dot(ring, a, b, zero):
    acc = zero
    for x, y in zip(a, b):
        acc = ring.add(acc, ring.mul(x, y))
    return acc


def _matmul(ring, X, Y, zero, cols):
    return [[_dot(ring, row, [Y[t][j] for t in range(len(Y))], zero) for j in range(cols)]
            for row in X]


def charpoly(ring, M, one, zero):
    """det(lambda I - M) by Berkowitz, coefficients from lambda^n down.

    Division free, so it runs unchanged on batches.  Read backwards the same
    list is det(I - x M) = sum_i c_i x^i.
    """
    n = len(M)
    if n == 0:
        return [one]
    poly = [one, ring.neg(M[n - 1][n - 1])]
    for r in range(n - 2, -1, -1):
        s = n - r
        R = M[r][r + 1:]
        sub = [row[r + 1:] for row in M[r + 1:]]
        v = [M[i][r] for i in range(r + 1, n)]
        t = [one, ring.neg(M[r][r])]
        for j in range(2, s + 1):
            t.append(ring.neg(_dot(ring, R, v, zero)))
            if j < s:
                v = [_dot(ring, row, v, zero) for row in sub]
        poly = [_dot(ring, [t[i - j] for j in range(max(0, i - s), min(i, s - 1) + 1)],
                     poly[max(0, i - s):min(i, s - 1) + 1], zero)
                for i in range(s + 1)]
    return poly


def _horner(ring, coeffs, x, zero):
    acc = zero
    for c in reversed(coeffs):
        acc = ring.add(ring.mul(acc, x), c)
    return acc


def _walk_terms(ring, ASS, ASY, AYS, AYY, d, zero):
    """W_l = A_SY A_YY^(l-1) A_YS for l = 1..d, W_0 = A_SS."""
    k = len(ASS)
    W = [ASS]
    V = AYS
    for ell in range(1, d + 1):
        W.append(_matmul(ring, ASY, V, zero, k))
        if ell < d:
            V = _matmul(ring, AYY, V, zero, k)
    return W


def _inverse_coeffs(ring, c, d, one, zero):
    """1 / sum c_i x^i mod x^(d+1), for c_0 = 1."""
    out = [one]
    for j in range(1, d + 1):
        acc = zero
        for i in range(1, min(j, len(c) - 1) + 1):
            acc = ring.add(acc, ring.mul(c[i], out[j - i]))
        out.append(ring.neg(acc))
    return out


@lru_cache(maxsize=64)
def extraction_weights(F, npts, d):
    """lambda_l with [x^d] R = sum_l lambda_l R(l) for deg R < npts, points 0..npts-1."""
    if npts > F.q:
        raise ValueError(f"field too small: need {npts} points, |F| = {F.q}")
    pts = list(range(npts))
    Z = [1]
    for x in pts:
        Z = poly_mul(F, Z, [F.neg(x), 1])
    out = []
    for x in pts:
        # Z / (t - x) by synthetic division
        quot = [0] * npts
        acc = 0
        for i in range(npts, 0, -1):
            acc = F.add(Z[i], F.mul(acc, x)) if i < npts else Z[i]
            quot[i - 1] = acc
        denom = 0
        for c in reversed(quot):
            denom = F.add(F.mul(denom, x), c)
        out.append(F.mul(quot[d], F.inv(denom)) if d < npts else 0)
    return tuple(out)


# -- faithful strategy ----------------------------------------------------------

def _blocks(A, k, Y):
    S = range(k)
    ASS = [[A[i][j] for j in S] for i in S]
    ASY = [[A[i][y] for y in Y] for i in S]
    AYS = [[A[y][j] for j in S] for y in Y]
    AYY = [[A[y][z] for z in Y] for y in Y]
    return ASS, ASY, AYS, AYY


def _faithful(A, F, k, target):
    n = len(A)
    d = n - k
    if d == 0:
        yield 1, [list(row) for row in A]
        return
    npts = points_needed(n, k, target)
    lam = extraction_weights(F, npts, d)
    minus_one = F.neg(1)
    for mask in range(1 << d):
        Y = [k + i for i in range(d) if mask >> i & 1]
        sign = 1 if (d - len(Y)) % 2 == 0 else minus_one
        ASS, ASY, AYS, AYY = _blocks(A, k, Y)
        W = _walk_terms(F, ASS, ASY, AYS, AYY, d, 0)
        Dt = None
        if target == "per":
            Dt = _inverse_coeffs(F, charpoly(F, AYY, 1, 0), d, 1, 0)
        for x, lx in zip(range(npts), lam):
            Fm = [[_horner(F, [W[e][i][j] for e in range(d + 1)], x, 0) for j in range(k)]
                  for i in range(k)]
            if Dt is not None:
                s = _horner(F, Dt, x, 0)
                Fm[0] = [F.mul(v, s) for v in Fm[0]]
            yield F.mul(sign, lx), Fm


def faithful_batches(A, F, k, target, chunk=1 << 16, vf=None):
    """The faithful stream in numpy blocks: yields (weights (M,), mats (M, k, k)).

    Non-special subsets are handled many at a time by masking rows and
    columns of A_NN instead of slicing; the order of instances matches the
    scalar generator exactly.
    """
    vf = vf or VecField(F)
    n = len(A)
    d = n - k
    if d == 0:
        yield np.ones(1, np.int64), vf.asarray(A)[None]
        return
    npts = points_needed(n, k, target)
    lam = extraction_weights(F, npts, d)
    minus_one = F.neg(1)
    per_y = max(1, chunk // (npts * k * k))
    step = 1 << max(0, min(d, per_y.bit_length() - 1))
    M = vf.asarray(A)
    for lo in range(0, 1 << d, step):
        masks = np.arange(lo, lo + step, dtype=np.int64)
        member = [(masks >> i) & 1 for i in range(d)]
        sizes = sum(member)
        sign = np.where((d - sizes) % 2 == 0, 1, minus_one).astype(np.int64)
        ASS = [[np.full(step, M[i, j]) for j in range(k)] for i in range(k)]
        ASY = [[M[i, k + y] * member[y] for y in range(d)] for i in range(k)]
        AYS = [[M[k + y, j] * member[y] for j in range(k)] for y in range(d)]
        AYY = [[M[k + y, k + z] * (member[y] * member[z]) for z in range(d)] for y in range(d)]
        zero = np.zeros(step, np.int64)
        one = np.ones(step, np.int64)
        W = _walk_terms(vf, ASS, ASY, AYS, AYY, d, zero)
        Dt = None
        if target == "per":
            Dt = _inverse_coeffs(vf, charpoly(vf, AYY, one, zero), d, one, zero)
        mats = np.empty((step, npts, k, k), np.int64)
        weights = np.empty((step, npts), np.int64)
        for x, lx in zip(range(npts), lam):
            for i in range(k):
                for j in range(k):
                    mats[:, x, i, j] = _horner(vf, [W[e][i][j] for e in range(d + 1)], x, zero)
            if Dt is not None:
                s = _horner(vf, Dt, x, zero)
                mats[:, x, 0, :] = vf.mul(mats[:, x, 0, :], s[:, None])
            weights[:, x] = vf.mul(sign, lx)
        yield weights.reshape(-1), mats.reshape(-1, k, k)


# -- laplace strategy -----------------------------------------------------------

def _laplace_per(A, F, k, weight):
    n = len(A)
    if n == k:
        yield weight, [list(row) for row in A]
        return
    for j in range(n):
        if A[0][j]:
            sub = [row[:j] + row[j + 1:] for row in A[1:]]
            yield from _laplace_per(sub, F, k, F.mul(weight, A[0][j]))


def _contract(A, v):
    """Merge vertex 0 with v along the edge 0 -> v."""
    rest = [u for u in range(1, len(A)) if u != v]
    out = [[A[v][0]] + [A[v][u] for u in rest]]
    for u in rest:
        out.append([A[u][0]] + [A[u][w] for w in rest])
    return out


def _laplace_hc(A, F, k, weight):
    n = len(A)
    if n == k:
        yield weight, [list(row) for row in A]
        return
    for v in range(1, n):
        if A[0][v]:
            yield from _laplace_hc(_contract(A, v), F, k, F.mul(weight, A[0][v]))


def reduce_instances(A, F, k, target, strategy="faithful"):
    """Stream of (weight, k x k matrix) with sum weight * P(matrix) = P(A)."""
    n = len(A)
    _check(n, k, target)
    if strategy == "faithful":
        if n > k and points_needed(n, k, target) > F.q:
            raise ValueError(f"field too small: need {points_needed(n, k, target)} points")
        return _faithful(A, F, k, target)
    if strategy == "laplace":
        gen = _laplace_per if target == "per" else _laplace_hc
        return gen(A, F, k, 1)
    raise ValueError(f"unknown strategy {strategy!r}")


def batches_supported(F):
    return vec_supported(F)

