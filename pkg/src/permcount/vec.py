"""Elementwise GF arithmetic on numpy int64 arrays.

Used by the batched engines.  Prime fields with p < VEC_LIMIT do plain
modular int64 arithmetic; extension fields need the log/exp tables of their
GF context, so q must be at most field.TABLE_LIMIT.
"""

import numpy as np

from .field import TABLE_LIMIT

VEC_LIMIT = 1 << 20


def vec_supported(F):
    if F.ell == 1:
        return F.p < VEC_LIMIT
    return F.q <= TABLE_LIMIT


class VecField:
    def __init__(self, F):
        if not vec_supported(F):
            raise ValueError(f"{F!r} is too large for vector arithmetic")
        self.F = F
        self.q = F.q
        self.p = F.p
        if F.ell == 1:
            self._bind_prime()
        else:
            F.ensure_tables()
            self._bind_tables()
        self.mults = 0
        self._count()

    def asarray(self, x):
        return np.asarray(x, dtype=np.int64)

    def const(self, c, shape):
        return np.full(shape, c, dtype=np.int64)

    # -- prime fields -------------------------------------------------------

    def _bind_prime(self):
        p = self.p

        def add(x, y):
            return (x + y) % p

        def sub(x, y):
            return (x - y) % p

        def neg(x):
            return (-x) % p

        def mul(x, y):
            return (x * y) % p

        def fsum(x, axis=-1):
            return np.sum(x, axis=axis) % p

        def matmul(x, y):
            return np.matmul(x, y) % p

        self.add, self.sub, self.neg, self.mul = add, sub, neg, mul
        self.sum, self.matmul = fsum, matmul

    # -- extension fields via tables ------------------------------------------

    def _bind_tables(self):
        F = self.F
        n = F.q - 1
        exp = np.array(F._exp, dtype=np.int64)
        log = np.array(F._log, dtype=np.int64)
        self._exp, self._log = exp, log

        def mul(x, y):
            x, y = np.broadcast_arrays(np.asarray(x), np.asarray(y))
            out = exp[log[x] + log[y]]
            return np.where((x == 0) | (y == 0), 0, out)

        if F.p == 2:
            def add(x, y):
                return np.bitwise_xor(x, y)

            def neg(x):
                return np.asarray(x, dtype=np.int64)

            sub = add

            def fsum(x, axis=-1):
                return np.bitwise_xor.reduce(x, axis=axis)
        else:
            zech = np.array(F._zech, dtype=np.int64)
            negt = np.array(F._negt, dtype=np.int64)

            def add(x, y):
                x, y = np.broadcast_arrays(np.asarray(x), np.asarray(y))
                lx, ly = log[x], log[y]
                z = zech[(ly - lx) % n]
                s = np.where(z < 0, 0, exp[lx + np.maximum(z, 0)])
                return np.where(x == 0, y, np.where(y == 0, x, s))

            def neg(x):
                return negt[x]

            def sub(x, y):
                return add(x, negt[y])

            def fsum(x, axis=-1):
                x = np.moveaxis(np.asarray(x), axis, -1)
                while x.shape[-1] > 1:
                    if x.shape[-1] % 2:
                        x = np.concatenate([x, np.zeros(x.shape[:-1] + (1,), np.int64)], axis=-1)
                    x = add(x[..., 0::2], x[..., 1::2])
                if x.shape[-1] == 0:
                    return np.zeros(x.shape[:-1], np.int64)
                return x[..., 0]

        def matmul(x, y):
            x, y = np.asarray(x), np.asarray(y)
            acc = None
            for t in range(x.shape[-1]):
                term = mul(x[..., :, t:t + 1], y[..., t:t + 1, :])
                acc = term if acc is None else add(acc, term)
            if acc is None:
                shape = np.broadcast_shapes(x.shape[:-1], y.shape[:-2] + (1,))
                return np.zeros(shape[:-1] + (x.shape[-2], y.shape[-1]), np.int64)
            return acc

        self.add, self.sub, self.neg, self.mul = add, sub, neg, mul
        self.sum, self.matmul = fsum, matmul

    def _count(self):
        """Wrap mul and matmul so that self.mults counts element products."""
        mul, matmul = self.mul, self.matmul

        def counted_mul(x, y):
            out = mul(x, y)
            self.mults += np.size(out)
            return out

        def counted_matmul(x, y):
            out = matmul(x, y)
            self.mults += np.size(out) * np.shape(x)[-1]
            return out

        self.mul, self.matmul = counted_mul, counted_matmul

    # -- shared ---------------------------------------------------------------

    def pow(self, x, e):
        x = np.asarray(x, dtype=np.int64)
        if self.F.ell > 1:
            n = self.q - 1
            if e == 0:
                return np.ones_like(x)
            out = self._exp[(self._log[x] * (e % n)) % n]
            return np.where(x == 0, 0, out)
        out = np.ones_like(x)
        base = x
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def dot(self, x, y, axis=-1):
        return self.sum(self.mul(x, y), axis=axis)
