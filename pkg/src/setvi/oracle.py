"""Independent brute-force references.

These checks deliberately avoid the primary code paths: dominance is tested
with raw dot products against the dual base, residual membership is decided
from the definition ``B + {z} ⊆ A``, and Dini derivatives are estimated in
floating point (mpmath) on a dense geometric grid.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import mpmath
import sympy as sp

from .extreal import INF, NEG_INF, ExtReal

__all__ = [
    "OracleReport",
    "weak_efficient_bruteforce",
    "segment_efficient_bruteforce",
    "residual_bruteforce",
    "derivative_oracle",
    "profile_function",
    "instance_hash",
    "ORACLE_TOL",
]

# agreement tolerance between the floating-point oracle and exact values
ORACLE_TOL = 1e-4
# quotients larger than this in absolute value are read as infinite
_BIG = 1e6


@dataclass
class OracleReport:
    method: str
    instance_hash: str
    results: list = field(default_factory=list)
    disagreements: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements


def instance_hash(data) -> str:
    blob = json.dumps(data, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _dot(a: Sequence, b: Sequence) -> Fraction:
    s = Fraction(0)
    for x, y in zip(a, b):
        s += Fraction(x) * Fraction(y)
    return s


# -- weak efficiency --------------------------------------------------------


def weak_efficient_bruteforce(psi, cone, X: Iterable[Sequence]) -> list[tuple]:
    """Points of X whose image is not strictly dominated by another image.

    ``psi(x0) - psi(x)`` lies in int C exactly when every dual-base vector
    is strictly negative on it, since C = {z : m.z <= 0 for m in M*}.
    Points outside the domain of ``psi`` are skipped.
    """
    pts = [tuple(Fraction(c) for c in x) for x in X]
    vals = {}
    for x in pts:
        v = psi.value(x)
        if v is not None:
            vals[x] = tuple(Fraction(c) for c in v)
    ms = [tuple(Fraction(c) for c in m) for m in cone.dual_base]
    out = []
    for x0, v0 in vals.items():
        dominated = False
        for v in vals.values():
            diff = [a - b for a, b in zip(v0, v)]
            if all(_dot(m, diff) < 0 for m in ms):
                dominated = True
                break
        if not dominated:
            out.append(x0)
    return out


def _open_interval_nonempty(lo, lo_closed, hi, hi_closed) -> bool:
    if lo < hi:
        return True
    return lo == hi and lo_closed and hi_closed


def _segment_improves(components, ms, x0, x) -> bool:
    """Whether some ``t`` in (0, 1] has ``psi(x0) - psi(x0 + t(x - x0))`` in int C.

    ``components`` are raw max-affine data ``[[(a, b), ...], ...]``.  Along
    the segment each piece is ``alpha + beta t``; between consecutive
    crossings the active pieces are fixed, so the strict conditions
    ``m.(psi(t) - psi(0)) > 0`` are linear in ``t``.
    """
    u = [Fraction(p) - Fraction(q) for p, q in zip(x, x0)]
    lines = [[(_dot(a, x0) + Fraction(b), _dot(a, u)) for a, b in comp] for comp in components]
    cuts = {Fraction(0), Fraction(1)}
    for comp in lines:
        for i, (a1, b1) in enumerate(comp):
            for a2, b2 in comp[i + 1:]:
                if b1 != b2:
                    t = (a2 - a1) / (b1 - b2)
                    if 0 < t < 1:
                        cuts.add(t)
    ts = sorted(cuts)
    base = [max(a for a, _ in comp) for comp in lines]
    for ta, tb in zip(ts, ts[1:]):
        mid = (ta + tb) / 2
        act = [max(comp, key=lambda ab: ab[0] + ab[1] * mid) for comp in lines]
        lo, lo_closed, hi, hi_closed = ta, ta > 0, tb, True
        feasible = True
        for m in ms:
            c = sum(Fraction(mi) * (a - p0) for mi, (a, _), p0 in zip(m, act, base))
            e = sum(Fraction(mi) * b for mi, (_, b) in zip(m, act))
            if e == 0:
                if c <= 0:
                    feasible = False
                    break
            elif e > 0:
                r = -c / e
                if r > lo or (r == lo and lo_closed):
                    lo, lo_closed = r, False
            else:
                r = -c / e
                if r < hi or (r == hi and hi_closed):
                    hi, hi_closed = r, False
        if feasible and _open_interval_nonempty(lo, lo_closed, hi, hi_closed):
            return True
    return False


def segment_efficient_bruteforce(components, cone, X: Iterable[Sequence]) -> list[tuple]:
    """Points x0 of X not strictly improved anywhere on the segments ``[x0, x]``, x in X.

    This is weak efficiency over the star of X at each candidate, the set of
    points the convexity arguments actually visit.  ``components`` are raw
    max-affine data on a convex domain containing X.
    """
    pts = [tuple(Fraction(c) for c in x) for x in X]
    comps = [[(tuple(Fraction(c) for c in a), Fraction(b)) for a, b in comp] for comp in components]
    # psi(x0) - psi(z) in int C  iff  m.(psi(z) - psi(x0)) > 0 for all m in M*
    ms = [tuple(Fraction(c) for c in m) for m in cone.dual_base]
    out = []
    for x0 in pts:
        # only the farthest point on each ray from x0 matters
        far: dict[tuple, tuple[Fraction, tuple]] = {}
        for x in pts:
            u = [p - q for p, q in zip(x, x0)]
            if not any(u):
                continue
            size = max(abs(c) for c in u)
            key = tuple(c / size for c in u)
            if key not in far or size > far[key][0]:
                far[key] = (size, x)
        if not any(_segment_improves(comps, ms, x0, x) for _, x in far.values()):
            out.append(x0)
    return out


# -- residual membership ----------------------------------------------------


def _translate_inside(a, b, z) -> bool:
    """Whether ``B + {z} ⊆ A`` directly from A's inequalities and B's generators."""
    if b.is_empty:
        return True
    if a.is_empty:
        return False
    if a.is_full:
        return True
    cons = a.hrep.constraints
    vr = b.vrep
    for v in vr.vertices:
        p = [Fraction(x) + Fraction(y) for x, y in zip(v, z)]
        if any(_dot(n, p) > c for n, c in cons):
            return False
    for r in vr.rays:
        if any(_dot(n, r) > 0 for n, _ in cons):
            return False
    for l in vr.lines:
        if any(_dot(n, l) != 0 for n, _ in cons):
            return False
    return True


def residual_bruteforce(a, b, probes: Iterable[Sequence], residual: Callable | None = None) -> OracleReport:
    """Compare the definition of ``A -. B`` with the primary residual on probe points."""
    if residual is None:
        from .conlinear import residual as residual
    r = residual(a, b)
    rep = OracleReport("residual-definition", "")
    for z in probes:
        z = tuple(Fraction(c) for c in z)
        direct = _translate_inside(a, b, z)
        primary = r.contains(z)
        rep.results.append((z, direct))
        if direct != primary:
            rep.disagreements.append((z, direct, primary))
    return rep


# -- derivatives ------------------------------------------------------------


def profile_function(profile) -> Callable[[mpmath.mpf], mpmath.mpf]:
    """Floating-point evaluator for a closed-form profile, built independently."""
    from .setfun import ExprProfile, PLProfile

    if isinstance(profile, ExprProfile):
        fn = sp.lambdify(profile.var, profile.expr, modules="mpmath")
        lo, hi = mpmath.mpf(profile.lo.numerator) / profile.lo.denominator, mpmath.mpf(profile.hi.numerator) / profile.hi.denominator

        def expr_eval(t):
            if t < lo or t > hi:
                return mpmath.inf
            return mpmath.mpf(fn(t))

        return expr_eval
    if isinstance(profile, PLProfile):
        pieces = [tuple(mpmath.mpf(c.numerator) / c.denominator if isinstance(c, Fraction) else c for c in p) for p in profile.pieces]

        def pl_eval(t):
            for lo, hi, lc, hc, s, o in pieces:
                if lo < t < hi or (lc and t == lo) or (hc and t == hi):
                    return s * t + o
            return mpmath.inf

        return pl_eval
    raise TypeError(f"no closed form for {type(profile).__name__}")


def default_grid(x, direction) -> list:
    """Geometric steps ``2^(-j/10)``, j = 10..200, ten times denser than the dyadic path."""
    return [mpmath.power(2, mpmath.mpf(-j) / 10) for j in range(10, 201)]


def _to_ext(v) -> ExtReal:
    if v == mpmath.inf or v > _BIG:
        return INF
    if v == -mpmath.inf or v < -_BIG:
        return NEG_INF
    return ExtReal(0, Fraction(str(mpmath.nstr(v, 12))).limit_denominator(10**6))


def derivative_oracle(phi: Callable, x=0, direction=1, ts: Sequence | None = None):
    """Tail limsup/liminf of ``(phi(x + t u) - phi(x)) / t`` on a dense grid.

    Returns a ``DiniScalarResult`` flagged inexact; values are rounded to
    nearby rationals and should be compared with ``ORACLE_TOL``.
    """
    from .dini import DiniScalarResult

    with mpmath.workdps(40):
        x = mpmath.mpf(Fraction(x).numerator) / Fraction(x).denominator
        u = mpmath.mpf(Fraction(direction).numerator) / Fraction(direction).denominator
        ts = default_grid(x, u) if ts is None else [mpmath.mpf(t) for t in ts]
        p0 = phi(x)
        if p0 == mpmath.inf:
            return DiniScalarResult(NEG_INF, NEG_INF, False)
        qs = []
        for t in ts:
            pt = phi(x + t * u)
            qs.append(mpmath.inf if pt == mpmath.inf else (pt - p0) / t)
        tail = qs[len(qs) - max(1, len(qs) // 10):]
        upper, lower = _to_ext(max(tail)), _to_ext(min(tail))
    return DiniScalarResult(upper, lower, False)


def close(a: ExtReal, b: ExtReal, tol: float = ORACLE_TOL) -> bool:
    if not (a.is_finite and b.is_finite):
        return a == b
    return abs(float(a.value - b.value)) <= tol
