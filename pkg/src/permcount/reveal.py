"""Recover P(a) from q order-r evaluations along a Kakeya curve.

Q(t) = P(C_a(t)) has degree <= k*u < q*r and its t^{k*u} coefficient is
P(a) (P is homogeneous of degree k and each curve coordinate has leading
coefficient a_i).  Querying the evaluator bound to C_a(tau) with the curve
shifted by tau gives Q(t + tau) mod t^r, i.e. Q mod (t - tau)^r after
undoing the shift, and Hermite interpolation over all tau finishes the job.
"""

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .hc_eval import HcEvaluator, hc_batch_r1
from .kakeya import curve_for_point, curve_values
from .per_eval import PerEvaluator, per_batch_r1
from .poly import hermite_coefficient, hermite_interpolate, hermite_weights, taylor_shift


@dataclass(frozen=True)
class RevealParams:
    k: int
    b: int
    q: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.b < 1 or (self.q - 1) % self.b:
            raise ValueError(f"b = {self.b} does not divide q - 1 = {self.q - 1}")
        if self.u < 1:
            raise ValueError(f"u = {self.u} < 1")

    @property
    def u(self):
        return (self.q - 1) // self.b - 1

    @property
    def r(self):
        return -(-self.k // self.b)

    @property
    def degree(self):
        return self.k * self.u


BUILDERS = {"per": PerEvaluator, "hc": HcEvaluator}
BATCH = {"per": per_batch_r1, "hc": hc_batch_r1}


class EvaluatorFamily:
    """Memoized point -> evaluator map over a Kakeya set.

    Points are tuples of m = k*k coordinates, row-major.  With eager=True all
    evaluators are built up front (requires an enumerated K).
    """

    def __init__(self, F, mode, k, r, K, eager=False, stats=None):
        if mode not in BUILDERS:
            raise ValueError(f"unknown mode {mode!r}")
        self.F, self.mode, self.k, self.r, self.K = F, mode, k, r, K
        self.stats = stats if stats is not None else Counter()
        self._cache = {}
        if eager:
            for pt in K:
                self._build(pt)

    def _build(self, point):
        k = self.k
        A = [list(point[i * k:(i + 1) * k]) for i in range(k)]
        ev = BUILDERS[self.mode](self.F, A, self.r)
        self._cache[point] = ev
        self.stats["evaluators"] += 1
        return ev

    def __call__(self, point):
        point = tuple(point)
        ev = self._cache.get(point)
        if ev is None:
            if point not in self.K:
                raise ValueError(f"evaluator point {point} is not in the Kakeya set")
            ev = self._build(point)
        return ev

    def __len__(self):
        return len(self._cache)


def reveal_eval(evaluator_at, K, a, params, stats=None, check=False):
    """P(a) from exactly q evaluator queries."""
    F = K.F
    if F.q != params.q or K.u != params.u:
        raise ValueError("Kakeya set does not match the reveal parameters")
    r, D = params.r, params.degree
    curve = curve_for_point(K, a)
    residues = {}
    for tau in F.elements():
        ev = evaluator_at(curve.point_at(tau))
        res = ev.evaluate(curve.shifted(tau, r))
        if stats is not None:
            stats["queries"] += 1
        residues[tau] = taylor_shift(F, res, F.neg(tau))
    if check:
        Q = hermite_interpolate(F, r, residues)
        if len(Q) - 1 > D:
            raise AssertionError(f"interpolant has degree {len(Q) - 1} > {D}")
        return Q[D] if D < len(Q) else 0
    return hermite_coefficient(F, r, residues, D)


def reveal_batch(vf, K, points, params, mode, stats=None, chunk=1 << 18):
    """Order-1 reveal for a stack of points (N, m) -> (N,).

    Same queries as reveal_eval, evaluated in bulk: every evaluator of order 1
    returns the constant P(C_a(tau)), so the evaluator build and its query
    collapse into one batched evaluation of P.
    """
    if params.r != 1:
        raise ValueError("batched reveal needs r = 1")
    F = vf.F
    q, k, u = F.q, params.k, params.u
    points = np.asarray(points, dtype=np.int64)
    N = points.shape[0]
    w = vf.asarray(hermite_weights(F, params.degree))
    taus = np.arange(q, dtype=np.int64)
    evaluate = BATCH[mode]
    out = np.empty(N, np.int64)
    step = max(1, chunk // (q * k * k))
    for lo in range(0, N, step):
        a = points[lo:lo + step]
        n = a.shape[0]
        pts, y = curve_values(vf, u, a, taus)
        ok = K.contains_batch(vf, pts.reshape(n * q, -1), np.tile(y, n))
        if not ok.all():
            raise AssertionError("curve point outside the Kakeya set")
        vals = evaluate(vf, pts.reshape(n * q, k, k)).reshape(n, q)
        out[lo:lo + n] = vf.dot(vals, w[None, :])
    if stats is not None:
        stats["queries"] += N * q
    return out

