"""Degree-u Kakeya sets in F_q^m from the (u+1)-th power map.

With P = {z^(u+1) : z in F_q} (b + 1 elements, b = (q-1)/(u+1)) the set

    K = { ((x_1 - y)/(u+1), ..., (x_m - y)/(u+1)) : x_i, y in P }

contains, for every a in F_q^m, the whole curve

    g_i(t) = ((a_i + t)^(u+1) - t^(u+1)) / (u+1),

whose t^u coefficient is a_i: take x_i = (a_i + t)^(u+1) and y = t^(u+1).
"""

import struct
from dataclasses import dataclass
from itertools import product
from math import comb

import numpy as np

from .poly import poly_eval, taylor_shift, trim

MAGIC = b"KKYA"
VERSION = 1
_HEADER = struct.Struct("<4sHQIIQ")
DEFAULT_BUDGET = 1 << 20


class KakeyaSet:
    def __init__(self, F, m, b, budget=DEFAULT_BUDGET):
        q = F.q
        if m < 1:
            raise ValueError("m must be >= 1")
        if b < 1 or (q - 1) % b:
            raise ValueError(f"b = {b} does not divide q - 1 = {q - 1}")
        u = (q - 1) // b - 1
        if u < 1:
            raise ValueError(f"degree u = {u} < 1 (need b < q - 1)")
        self.F, self.m, self.b, self.u = F, m, b, u
        e = u + 1
        self.powers = frozenset(F.pow(z, e) for z in F.elements())
        assert len(self.powers) == b + 1
        self._scale = F.inv(F.from_int(e))  # 1/(u+1), nonzero as p does not divide u+1
        self._e = F.from_int(e)
        self._points = None
        self._mask = None
        if self.size_bound <= budget:
            self._points = self._enumerate()

    @property
    def size_bound(self):
        return (self.b + 1) ** (self.m + 1)

    @property
    def enumerated(self):
        return self._points is not None

    def _enumerate(self):
        F, s = self.F, self._scale
        pts = set()
        P = sorted(self.powers)
        for y in P:
            coords = [F.mul(F.sub(x, y), s) for x in P]
            pts.update(product(coords, repeat=self.m))
        return pts

    def __len__(self):
        if self._points is None:
            raise TypeError("Kakeya set not enumerated (over budget)")
        return len(self._points)

    def __iter__(self):
        if self._points is None:
            raise TypeError("Kakeya set not enumerated (over budget)")
        return iter(sorted(self._points))

    def __contains__(self, point):
        return self.contains(point)

    def contains(self, point, witness=None):
        point = tuple(point)
        if len(point) != self.m:
            return False
        if self._points is not None and witness is None:
            return point in self._points
        F, e, P = self.F, self._e, self.powers
        lifted = [F.mul(c, e) for c in point]
        ys = P if witness is None else (witness,) if witness in P else ()
        for y in ys:
            if all(F.add(x, y) in P for x in lifted):
                return True
        return False

    def power_mask(self):
        if self._mask is None:
            mask = np.zeros(self.F.q, dtype=bool)
            mask[sorted(self.powers)] = True
            self._mask = mask
        return self._mask

    def contains_batch(self, vf, points, witness):
        """Vector check with a shared witness y per row: (N, m), (N,) -> bool."""
        mask = self.power_mask()
        lifted = vf.mul(points, self._e)
        xs = vf.add(lifted, witness[..., None])
        return mask[witness] & mask[xs].all(axis=-1)

    # -- binary dump -----------------------------------------------------------

    def dump(self, path):
        pts = sorted(self)
        width = max(1, (self.F.q - 1).bit_length() + 7 >> 3)
        with open(path, "wb") as fh:
            fh.write(_HEADER.pack(MAGIC, VERSION, self.F.q, self.m, self.u, len(pts)))
            for pt in pts:
                for c in pt:
                    fh.write(c.to_bytes(width, "little"))

    @classmethod
    def load(cls, path, F):
        with open(path, "rb") as fh:
            data = fh.read()
        magic, version, q, m, u, count = _HEADER.unpack_from(data)
        if magic != MAGIC or version != VERSION:
            raise ValueError("not a Kakeya dump (bad magic or version)")
        if q != F.q:
            raise ValueError(f"dump is over q = {q}, field has q = {F.q}")
        K = cls(F, m, (q - 1) // (u + 1), budget=0)
        width = max(1, (q - 1).bit_length() + 7 >> 3)
        off = _HEADER.size
        if len(data) != off + count * m * width:
            raise ValueError("truncated Kakeya dump")
        pts = set()
        for i in range(count):
            pt = []
            for j in range(m):
                lo = off + (i * m + j) * width
                pt.append(int.from_bytes(data[lo:lo + width], "little"))
            pts.add(tuple(pt))
        K._points = pts
        return K


def kakeya_build(F, m, b, budget=DEFAULT_BUDGET):
    return KakeyaSet(F, m, b, budget)


@dataclass(frozen=True)
class Curve:
    target: tuple
    polys: tuple  # one coefficient list per coordinate, degree u
    F: object

    def point_at(self, tau):
        F = self.F
        return tuple(poly_eval(F, g, tau) for g in self.polys)

    def shifted(self, tau, r):
        """g_i(t + tau) mod t^r for every coordinate."""
        return [taylor_shift(self.F, g, tau, r) for g in self.polys]


def curve_poly(F, u, a):
    """Coefficients of ((a + t)^(u+1) - t^(u+1)) / (u+1)."""
    e = u + 1
    s = F.inv(F.from_int(e))
    out = []
    for j in range(e):  # coefficient of t^j is C(e, j) a^(e-j) / e
        c = F.mul(F.from_int(comb(e, j)), F.pow(a, e - j))
        out.append(F.mul(c, s))
    return trim(out)


def curve_for_point(K, a):
    a = tuple(a)
    if len(a) != K.m:
        raise ValueError(f"point has {len(a)} coordinates, expected {K.m}")
    F = K.F
    return Curve(a, tuple(curve_poly(F, K.u, F.check(x)) for x in a), F)


def curve_values(vf, u, a, taus):
    """Batched curve points: a (N, m), taus (T,) -> (N, T, m), plus tau^(u+1)."""
    e = u + 1
    scale = vf.F.inv(vf.F.from_int(e))
    y = vf.pow(taus, e)
    x = vf.pow(vf.add(a[:, None, :], taus[None, :, None]), e)
    return vf.mul(vf.sub(x, y[None, :, None]), scale), y

