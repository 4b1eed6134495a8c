"""Finite fields GF(p^ell) with elements packed into plain ints.

An element of GF(p^ell) is the integer sum(c_i * p**i) built from its
coefficient vector (c_0, ..., c_{ell-1}) over the basis 1, x, ..., x^{ell-1}.
For ell == 1 this is just the residue mod p.  All arithmetic goes through the
context object, e.g. ``F.mul(F.add(a, b), c)``.

Small extension fields (q <= TABLE_LIMIT) switch to log/exp tables; p == 2
addition is XOR, odd p uses Zech logarithms.
"""

from functools import lru_cache

from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

TABLE_LIMIT = 1 << 20
EAGER_TABLE_LIMIT = 1 << 16


def digits(a, p, ell):
    """Base-p digits of a, least significant first, padded to ell."""
    out = []
    for _ in range(ell):
        a, d = divmod(a, p)
        out.append(d)
    return out


def undigits(ds, p):
    a = 0
    for d in reversed(ds):
        a = a * p + d
    return a


def is_irreducible(coeffs, p):
    """coeffs low -> high, monic or not."""
    return bool(gf_irreducible_p([int(c) % p for c in reversed(coeffs)], p, ZZ))


def smallest_irreducible(p, ell):
    """Lexicographically smallest monic irreducible of degree ell over F_p.

    Candidates x^ell + c(x) are ordered by the integer code of c, i.e. the
    coefficient of x^{ell-1} is the most significant digit.
    """
    for code in range(p ** ell):
        cand = digits(code, p, ell) + [1]
        if cand[0] == 0 and ell > 1:
            continue  # divisible by x
        if is_irreducible(cand, p):
            return tuple(cand)
    raise ArithmeticError("no irreducible polynomial found")  # unreachable


class GF:
    """The field F_q, q = p^ell.  Instances are immutable."""

    def __init__(self, p, ell=1, modulus=None):
        p, ell = int(p), int(ell)
        if ell < 1:
            raise ValueError("extension degree must be >= 1")
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.ell = ell
        self.q = p ** ell
        self.zero = 0
        self.one = 1
        self.tables = False
        if ell == 1:
            if modulus is not None:
                raise ValueError("prime field takes no modulus")
            self.modulus = None
            self._bind_prime()
            return
        if modulus is None:
            modulus = smallest_irreducible(p, ell)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != ell + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree ell")
        if not is_irreducible(modulus, p):
            raise ValueError("modulus is reducible")
        self.modulus = modulus
        self._bind_slow()
        if self.q <= EAGER_TABLE_LIMIT:
            self.ensure_tables()

    # -- identity -----------------------------------------------------------

    def key(self):
        return (self.p, self.ell, self.modulus)

    def __eq__(self, other):
        return isinstance(other, GF) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.ell == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.ell}, modulus={list(self.modulus)})"

    @property
    def is_prime(self):
        return self.ell == 1

    # -- prime fields ---------------------------------------------------------

    def _bind_prime(self):
        p = self.p

        def add(a, b):
            return (a + b) % p

        def sub(a, b):
            return (a - b) % p

        def neg(a):
            return -a % p

        def mul(a, b):
            return a * b % p

        def inv(a):
            if a % p == 0:
                raise ZeroDivisionError("inverse of zero")
            return pow(a, -1, p)

        def power(a, e):
            if e < 0:
                return pow(inv(a), -e, p)
            return pow(a, e, p)

        self.add, self.sub, self.neg = add, sub, neg
        self.mul, self.inv, self.pow = mul, inv, power

    # -- extension fields, polynomial arithmetic ------------------------------

    def _bind_slow(self):
        p, ell, q = self.p, self.ell, self.q
        mod = self.modulus

        if p == 2:
            modint = undigits(list(mod), 2)
            top = 1 << ell

            def add(a, b):
                return a ^ b

            def neg(a):
                return a

            sub = add

            def mul(a, b):
                r = 0
                while b:
                    if b & 1:
                        r ^= a
                    b >>= 1
                    a <<= 1
                    if a & top:
                        a ^= modint
                return r
        else:
            def add(a, b):
                r, m = 0, 1
                while a or b:
                    a, x = divmod(a, p)
                    b, y = divmod(b, p)
                    r += (x + y) % p * m
                    m *= p
                return r

            def neg(a):
                r, m = 0, 1
                while a:
                    a, x = divmod(a, p)
                    r += (-x % p) * m
                    m *= p
                return r

            def sub(a, b):
                return add(a, neg(b))

            def mul(a, b):
                if a == 0 or b == 0:
                    return 0
                x = digits(a, p, ell)
                y = digits(b, p, ell)
                prod = [0] * (2 * ell - 1)
                for i, xi in enumerate(x):
                    if xi:
                        for j, yj in enumerate(y):
                            prod[i + j] += xi * yj
                for d in range(2 * ell - 2, ell - 1, -1):
                    c = prod[d] % p
                    if c:
                        for i in range(ell):
                            prod[d - ell + i] -= c * mod[i]
                return undigits([c % p for c in prod[:ell]], p)

        def power(a, e):
            if e < 0:
                a, e = inv(a), -e
            r = 1
            while e:
                if e & 1:
                    r = mul(r, a)
                a = mul(a, a)
                e >>= 1
            return r

        def inv(a):
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return power(a, q - 2)

        self.add, self.sub, self.neg = add, sub, neg
        self.mul, self.inv, self.pow = mul, inv, power

    def ensure_tables(self):
        """Build log/exp (and Zech) tables; no-op for prime or huge fields."""
        if self.tables or self.ell == 1:
            return self.tables
        if self.q > TABLE_LIMIT:
            return False
        p, q = self.p, self.q
        n = q - 1
        mul, add = self.mul, self.add
        cofactors = [n // f for f in factorint(n)]
        for g in range(2, q):
            if all(self.pow(g, c) != 1 for c in cofactors):
                break
        exp = [0] * (2 * n)
        log = [0] * q
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = mul(x, g)
        exp[n:] = exp[:n]
        self.generator = g
        self._exp, self._log = exp, log
        if p != 2:
            zech = [0] * n
            for i in range(n):
                s = add(exp[i], 1)
                zech[i] = -1 if s == 0 else log[s]
            negt = [0] * q
            for a in range(q):
                negt[a] = self.neg(a)
            self._zech, self._negt = zech, negt

            def tadd(a, b):
                if a == 0:
                    return b
                if b == 0:
                    return a
                la = log[a]
                d = log[b] - la
                if d < 0:
                    d += n
                z = zech[d]
                return 0 if z < 0 else exp[la + z]

            def tneg(a):
                return negt[a]

            def tsub(a, b):
                return tadd(a, negt[b])

            self.add, self.neg, self.sub = tadd, tneg, tsub

        def tmul(a, b):
            if a == 0 or b == 0:
                return 0
            return exp[log[a] + log[b]]

        def tinv(a):
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return exp[n - log[a]]

        def tpow(a, e):
            if a == 0:
                if e < 0:
                    raise ZeroDivisionError("inverse of zero")
                return 1 if e == 0 else 0
            return exp[log[a] * e % n]

        self.mul, self.inv, self.pow = tmul, tinv, tpow
        self.tables = True
        return True

    # -- conversions ----------------------------------------------------------

    def from_int(self, n):
        """Image of the integer n under Z -> F_q."""
        return n % self.p

    def coeffs(self, a):
        return digits(a, self.p, self.ell)

    def from_coeffs(self, cs):
        cs = list(cs)
        if len(cs) > self.ell:
            raise ValueError("too many coefficients")
        return undigits([c % self.p for c in cs], self.p)

    def elements(self):
        return range(self.q)

    def random(self, rng):
        return rng.randrange(self.q)

    def check(self, a):
        if not (isinstance(a, int) and 0 <= a < self.q):
            raise ValueError(f"{a!r} is not an element of {self!r}")
        return a

    def sum(self, xs):
        add = self.add
        s = 0
        for x in xs:
            s = add(s, x)
        return s


@lru_cache(maxsize=None)
def field_make(p, ell=1):
    """Cached GF(p^ell) with the deterministic modulus."""
    return GF(p, ell)


def prime_power(q):
    """Return (p, ell) with q = p^ell, or raise ValueError."""
    q = int(q)
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    f = factorint(q)
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, ell), = f.items()
    return p, ell


def field_of_order(q):
    p, ell = prime_power(q)
    return field_make(p, ell)
