"""Polynomials, truncated power series and Hermite interpolation over GF.

A polynomial is a list of field elements, coefficient of t^i at index i, with
no trailing zeros (the zero polynomial is ``[]``).  A truncated series of
order r is a list of exactly r elements and represents an element of
F[t]/t^r.  Every function takes the field context first.
"""

from functools import lru_cache
from math import comb


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def degree(a):
    """Degree of a trimmed polynomial; -1 stands in for -infinity."""
    return len(trim(a)) - 1


def poly_add(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    add = F.add
    for i, y in enumerate(b):
        out[i] = add(out[i], y)
    return trim(out)


def poly_neg(F, a):
    return [F.neg(x) for x in a]


def poly_sub(F, a, b):
    return poly_add(F, a, poly_neg(F, b))


def poly_scale(F, a, c):
    if c == 0:
        return []
    mul = F.mul
    return trim([mul(x, c) for x in a])


def poly_mul(F, a, b):
    if not a or not b:
        return []
    add, mul = F.add, F.mul
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = add(out[i + j], mul(x, y))
    return trim(out)


def poly_divmod(F, a, b):
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = trim(a)
    if len(a) < len(b):
        return [], a
    sub, mul = F.sub, F.mul
    lead_inv = F.inv(b[-1])
    rem = list(a)
    quot = [0] * (len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        c = mul(rem[i + len(b) - 1], lead_inv)
        quot[i] = c
        if c:
            for j, y in enumerate(b):
                rem[i + j] = sub(rem[i + j], mul(c, y))
    return trim(quot), trim(rem[:len(b) - 1])


def poly_mod(F, a, b):
    return poly_divmod(F, a, b)[1]


def poly_eval(F, a, x):
    add, mul = F.add, F.mul
    acc = 0
    for c in reversed(a):
        acc = add(mul(acc, x), c)
    return acc


def poly_pow(F, a, e):
    out = [1]
    while e:
        if e & 1:
            out = poly_mul(F, out, a)
        a = poly_mul(F, a, a)
        e >>= 1
    return out


# -- truncated series ---------------------------------------------------------

def series(F, a, r):
    """Truncate or zero-pad a coefficient list to a series of order r."""
    a = list(a[:r])
    return a + [0] * (r - len(a))


def _check_order(a, b):
    if len(a) != len(b):
        raise ValueError(f"truncation order mismatch: {len(a)} vs {len(b)}")


def series_add(F, a, b):
    _check_order(a, b)
    add = F.add
    return [add(x, y) for x, y in zip(a, b)]


def series_sub(F, a, b):
    _check_order(a, b)
    sub = F.sub
    return [sub(x, y) for x, y in zip(a, b)]


def series_mul(F, a, b):
    _check_order(a, b)
    r = len(a)
    add, mul = F.add, F.mul
    out = [0] * r
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j in range(r - i):
            y = b[j]
            if y:
                out[i + j] = add(out[i + j], mul(x, y))
    return out


def series_scale(F, a, c):
    mul = F.mul
    return [mul(x, c) for x in a]


def series_inv(F, a):
    """1/a mod t^r; needs a[0] != 0."""
    r = len(a)
    c0 = F.inv(a[0])
    add, mul, neg = F.add, F.mul, F.neg
    out = [c0] + [0] * (r - 1)
    for j in range(1, r):
        s = 0
        for i in range(1, j + 1):
            if a[i]:
                s = add(s, mul(a[i], out[j - i]))
        out[j] = neg(mul(s, c0))
    return out


def taylor_shift(F, a, tau, r=None):
    """Coefficients of a(t + tau); truncated to a series of order r if given."""
    a = trim(a)
    n = len(a)
    if tau == 0:
        return series(F, a, r) if r is not None else a
    add, mul = F.add, F.mul
    c = list(a)
    # repeated synthetic division by (t - tau), Horner style
    limit = n if r is None else min(r, n)
    for i in range(limit):
        for j in range(n - 2, i - 1, -1):
            c[j] = add(c[j], mul(tau, c[j + 1]))
    if r is None:
        return trim(c)
    return series(F, c, r)


# -- Hermite interpolation ----------------------------------------------------

def residues_of(F, Q, r):
    """{tau: Q mod (t - tau)^r} in the t-basis, for every tau in F."""
    out = {}
    for tau in F.elements():
        s = taylor_shift(F, Q, tau, r)
        out[tau] = trim(taylor_shift(F, s, F.neg(tau)))
    return out


def _validate_residues(F, r, residues):
    for tau in F.elements():
        if tau not in residues:
            raise ValueError(f"missing residue at {tau}")
        if len(trim(residues[tau])) > r:
            raise ValueError(f"residue at {tau} has degree >= {r}")


def hermite_interpolate(F, r, residues):
    """The unique Q of degree < q*r with Q = residues[tau] mod (t - tau)^r.

    Incremental CRT: keep (Q, M) with Q solving the points seen so far and
    M = prod (t - tau)^r, then lift by the next modulus.
    """
    if r < 1:
        raise ValueError("order must be >= 1")
    _validate_residues(F, r, residues)
    Q, M = [], [1]
    for tau in F.elements():
        mod = poly_pow(F, [F.neg(tau), 1], r)
        want = trim(residues[tau])
        # Q + M*h = want mod (t - tau)^r, h = (want - Q) * M^{-1} in the s-basis
        diff = series(F, taylor_shift(F, poly_sub(F, want, poly_mod(F, Q, mod)), tau), r)
        m_s = taylor_shift(F, poly_mod(F, M, mod), tau, r)
        h_s = series_mul(F, diff, series_inv(F, m_s))
        h = trim(taylor_shift(F, trim(h_s), F.neg(tau)))
        Q = poly_add(F, Q, poly_mul(F, M, h))
        M = poly_mul(F, M, mod)
    return Q


def _binom_mod(n, k, p):
    """C(n, k) mod p by Lucas."""
    out = 1
    while n or k:
        a, b = n % p, k % p
        if b > a:
            return 0
        out = out * comb(a, b) % p
        n //= p
        k //= p
    return out


@lru_cache(maxsize=256)
def _hermite_kernel(F, r, d):
    """Data for the closed form of [t^d] Q from residues over all of F.

    With H(s) = (s^{q-1} - 1)^r (which vanishes to order r at every nonzero
    point and equals prod_{tau'} (t - tau')^r divided by s^r, s = t - tau),
    the interpolant is Q(t) = sum_tau c_tau(s) H(s) where c_tau is the shifted
    residue times H^{-1} mod s^r.  Expanding (t - tau)^e gives for every
    coefficient i of c_tau a short list of (weight, exponent) pairs so that
    [t^d] = sum_tau sum_i c_tau[i] * sum weight * (-tau)^exponent.
    """
    q, p = F.q, F.p
    h_full = [(l * (q - 1), (comb(r, l) * (-1) ** (r - l)) % p) for l in range(r + 1)]
    # H mod s^r, inverted
    h_low = [0] * r
    for e, c in h_full:
        if e < r:
            h_low[e] = F.add(h_low[e], F.from_int(c))
    hinv = series_inv(F, h_low)
    terms = []
    for i in range(r):
        row = []
        for e0, c in h_full:
            e = i + e0
            if e < d or c == 0:
                continue
            b = _binom_mod(e, d, p)
            if b:
                row.append((F.from_int(c * b), e - d))
        terms.append(row)
    return hinv, terms


def hermite_coefficient(F, r, residues, d):
    """[t^d] of the Hermite interpolant, without building the polynomial."""
    _validate_residues(F, r, residues)
    hinv, terms = _hermite_kernel(F, r, d)
    add, mul, pw, neg = F.add, F.mul, F.pow, F.neg
    total = 0
    for tau in F.elements():
        res = trim(residues[tau])
        if not res:
            continue
        shifted = series(F, taylor_shift(F, res, tau), r)
        c = series_mul(F, shifted, hinv)
        mt = neg(tau)
        for i, ci in enumerate(c):
            if ci == 0:
                continue
            for w, e in terms[i]:
                total = add(total, mul(ci, mul(w, pw(mt, e))))
    return total


@lru_cache(maxsize=64)
def hermite_weights(F, d):
    """For r = 1: w with [t^d] Q = sum_tau w[tau] * Q(tau), indexed by tau."""
    hinv, terms = _hermite_kernel(F, 1, d)
    add, mul, pw, neg = F.add, F.mul, F.pow, F.neg
    out = []
    for tau in F.elements():
        mt = neg(tau)
        s = 0
        for w, e in terms[0]:
            s = add(s, mul(w, pw(mt, e)))
        out.append(mul(hinv[0], s))
    return tuple(out)
