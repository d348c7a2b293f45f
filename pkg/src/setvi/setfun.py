"""Set-valued maps ``f : X -> G(Z, C)``.

Three backends:

* :class:`Extension` -- the extension ``x -> {psi(x)} + C`` of a piecewise
  linear vector map (empty off the domain of ``psi``);
* :class:`Tracks` -- ``t -> conv{a_k + t b_k} + cone(rays) + C`` on an interval;
* :class:`Profiles` -- scalarizations only, for sets that are not polyhedral.

Polyhedral backends also expose a *germ*: an exact description of
``f(x + t u)`` for all ``t`` in ``(0, horizon]``.  Derivatives are computed
from it without any limit process.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from math import gcd
from typing import Callable, Iterable, Sequence

import sympy as sp

from . import conlinear as cl
from . import polyhedral as poly
from .conlinear import ConeSpec, GSet
from .extreal import INF, ExtReal, ext, inf_add, scale as ext_scale
from .polyhedral import HRep, VRep, add, dot, smul, sub, vec
from .tristate import Status

__all__ = [
    "Germ",
    "VectorMapPL",
    "MaxAffineMap",
    "SimplicialMap",
    "Piecewise1DMap",
    "SetFun",
    "Extension",
    "Tracks",
    "Restriction",
    "Profiles",
    "PLProfile",
    "ExprProfile",
    "SampledProfile",
    "extend",
    "restrict",
    "scalarization_family",
    "ConvexityReport",
    "check_convexity_sampled",
    "check_lsc_at",
    "kuhn_simplices",
]

Point = tuple  # tuple[Fraction, ...]


@dataclass(frozen=True)
class Germ:
    """``f(x + t u) = conv{p_k + t d_k} + cone(rays) + C`` for ``0 < t <= horizon``.

    ``tracks`` is empty when ``x + t u`` leaves the domain for every small
    ``t > 0`` (the images are then empty).
    """

    horizon: Fraction
    tracks: tuple[tuple[Point, Point], ...]
    rays: tuple[Point, ...] = ()

    @property
    def off_domain(self) -> bool:
        return not self.tracks


# -- vector maps ------------------------------------------------------------


class VectorMapPL(ABC):
    """Piecewise linear ``psi : S ⊆ Q^k -> Q^n``."""

    dim_x: int
    dim_z: int

    @abstractmethod
    def value(self, x: Sequence) -> Point | None:
        """``psi(x)``, or ``None`` off the domain."""

    @abstractmethod
    def germ(self, x: Sequence, u: Sequence) -> tuple[Fraction, Point, Point] | None:
        """``(horizon, p, d)`` with ``psi(x + t u) = p + t d`` on ``(0, horizon]``."""


def _integral(v: Sequence[Fraction]) -> tuple[int, ...] | None:
    if all(c.denominator == 1 for c in v):
        return tuple(c.numerator for c in v)
    return None


def _idot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class MaxAffineMap(VectorMapPL):
    """Each component is ``max_k (<a_k, x> + b_k)`` on a polyhedral domain.

    All data are also kept scaled to integers so that integral points and
    directions (the common case on grids) avoid Fraction arithmetic.
    """

    domain: HRep
    components: tuple[tuple[tuple[Point, Fraction], ...], ...]
    _scaled: tuple = field(default=(), compare=False, repr=False)

    @classmethod
    def of(cls, domain: HRep, components: Iterable[Iterable[tuple[Iterable, object]]]) -> MaxAffineMap:
        comps = tuple(tuple((vec(a), Fraction(b)) for a, b in comp) for comp in components)
        if any(not c for c in comps):
            raise ValueError("every component needs at least one affine piece")
        return cls(domain, comps, cls._scale(domain, comps))

    @staticmethod
    def _scale(domain: HRep, comps) -> tuple:
        def lcm_of(rows):
            den = 1
            for row in rows:
                for c in row:
                    den = den * c.denominator // gcd(den, c.denominator)
            return den

        dl = lcm_of([tuple(g) + (h,) for g, h in domain.constraints])
        drows = tuple((tuple(int(c * dl) for c in g), int(h * dl)) for g, h in domain.constraints)
        cl_ = lcm_of([tuple(a) + (b,) for comp in comps for a, b in comp])
        crows = tuple(tuple((tuple(int(c * cl_) for c in a), int(b * cl_)) for a, b in comp) for comp in comps)
        return drows, cl_, crows

    @property
    def dim_x(self) -> int:
        return self.domain.dim

    @property
    def dim_z(self) -> int:
        return len(self.components)

    def value(self, x):
        x = vec(x)
        xi = _integral(x)
        if xi is not None and self._scaled and not self.domain.is_empty:
            drows, den, crows = self._scaled
            if any(_idot(g, xi) > h for g, h in drows):
                return None
            return tuple(Fraction(max(_idot(a, xi) + b for a, b in comp), den) for comp in crows)
        if not poly.contains_point(self.domain, x):
            return None
        return tuple(max(dot(a, x) + b for a, b in comp) for comp in self.components)

    def germ(self, x, u):
        x, u = vec(x), vec(u)
        xi, ui = _integral(x), _integral(u)
        if xi is not None and ui is not None and self._scaled and not self.domain.is_empty:
            return self._germ_int(xi, ui)
        if not poly.contains_point(self.domain, x):
            return None
        horizon = Fraction(1)
        for g, h in self.domain.constraints:
            gu = dot(g, u)
            if gu > 0:
                slack = h - dot(g, x)
                if slack == 0:
                    return None
                horizon = min(horizon, slack / gu)
        p, d = [], []
        for comp in self.components:
            vals = [dot(a, x) + b for a, b in comp]
            top = max(vals)
            slope = max(dot(a, u) for (a, _), v in zip(comp, vals) if v == top)
            for (a, _), v in zip(comp, vals):
                au = dot(a, u)
                if v < top and au > slope:
                    horizon = min(horizon, (top - v) / (au - slope))
            p.append(top)
            d.append(slope)
        return horizon, tuple(p), tuple(d)

    def _germ_int(self, x: tuple[int, ...], u: tuple[int, ...]):
        drows, den, crows = self._scaled
        hn, hd = 1, 1  # horizon as the ratio hn / hd
        for g, h in drows:
            slack = h - _idot(g, x)
            if slack < 0:
                return None
            gu = _idot(g, u)
            if gu > 0:
                if slack == 0:
                    return None
                if slack * hd < hn * gu:
                    hn, hd = slack, gu
        p, d = [], []
        for comp in crows:
            vals = [_idot(a, x) + b for a, b in comp]
            slopes = [_idot(a, u) for a, _ in comp]
            top = max(vals)
            slope = max(s for s, v in zip(slopes, vals) if v == top)
            for s, v in zip(slopes, vals):
                if v < top and s > slope and (top - v) * hd < hn * (s - slope):
                    hn, hd = top - v, s - slope
            p.append(Fraction(top, den))
            d.append(Fraction(slope, den))
        return Fraction(hn, hd), tuple(p), tuple(d)


def kuhn_simplices(shape: Sequence[int]) -> list[tuple[tuple[int, ...], ...]]:
    """Kuhn triangulation of the integer box ``prod [0, shape_i]``, as vertex index tuples."""
    dim = len(shape)
    out = []
    for base in product(*(range(s) for s in shape)):
        for perm in permutations(range(dim)):
            cur = list(base)
            simplex = [tuple(cur)]
            for axis in perm:
                cur[axis] += 1
                simplex.append(tuple(cur))
            out.append(tuple(simplex))
    return out


@dataclass(frozen=True)
class SimplicialMap(VectorMapPL):
    """Linear interpolation of grid values on a triangulation."""

    points: tuple[Point, ...]
    values: tuple[Point, ...]
    simplices: tuple[tuple[int, ...], ...]

    @classmethod
    def on_grid(cls, lows: Sequence[int], highs: Sequence[int], fn: Callable[[Point], Iterable]) -> SimplicialMap:
        shape = [h - l for h, l in zip(highs, lows)]
        coords = list(product(*(range(l, h + 1) for l, h in zip(lows, highs))))
        index = {c: i for i, c in enumerate(coords)}
        pts = tuple(vec(c) for c in coords)
        vals = tuple(vec(fn(p)) for p in pts)
        simp = []
        for s in kuhn_simplices(shape):
            simp.append(tuple(index[tuple(l + o for l, o in zip(lows, v))] for v in s))
        return cls(pts, vals, tuple(simp))

    @property
    def dim_x(self) -> int:
        return len(self.points[0])

    @property
    def dim_z(self) -> int:
        return len(self.values[0])

    def _bary(self, simplex: tuple[int, ...], x: Point) -> tuple[Fraction, ...] | None:
        v0 = self.points[simplex[0]]
        cols = [sub(self.points[i], v0) for i in simplex[1:]]
        k = self.dim_x
        mat = [[cols[j][i] for j in range(k)] for i in range(k)]
        lam = poly.solve(mat, sub(x, v0))
        if lam is None:
            return None
        return (1 - sum(lam),) + tuple(lam)

    def value(self, x):
        x = vec(x)
        for s in self.simplices:
            lam = self._bary(s, x)
            if lam is not None and all(l >= 0 for l in lam):
                out = tuple(Fraction(0) for _ in range(self.dim_z))
                for l, i in zip(lam, s):
                    out = add(out, smul(l, self.values[i]))
                return out
        return None

    def germ(self, x, u):
        x, u = vec(x), vec(u)
        base = self.value(x)
        if base is None:
            return None
        for s in self.simplices:
            lam = self._bary(s, x)
            if lam is None or any(l < 0 for l in lam):
                continue
            ahead = self._bary(s, add(x, u))
            mu = sub(ahead, lam)
            horizon = Fraction(1)
            ok = True
            for l, m in zip(lam, mu):
                if m < 0:
                    if l == 0:
                        ok = False
                        break
                    horizon = min(horizon, l / -m)
            if not ok:
                continue
            d = tuple(Fraction(0) for _ in range(self.dim_z))
            for m, i in zip(mu, s):
                d = add(d, smul(m, self.values[i]))
            return horizon, base, d
        return None


@dataclass(frozen=True)
class Piece1D:
    lo: Fraction
    hi: Fraction
    lo_closed: bool
    hi_closed: bool
    slope: Point
    offset: Point

    def contains(self, x: Fraction) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def at(self, x: Fraction) -> Point:
        return add(smul(x, self.slope), self.offset)


@dataclass(frozen=True)
class Piecewise1DMap(VectorMapPL):
    """Affine pieces on disjoint intervals of the line; jumps are allowed."""

    pieces: tuple[Piece1D, ...]

    @classmethod
    def of(cls, pieces: Iterable[tuple]) -> Piecewise1DMap:
        out = []
        for lo, hi, lc, hc, slope, offset in pieces:
            out.append(Piece1D(Fraction(lo), Fraction(hi), bool(lc), bool(hc), vec(slope), vec(offset)))
        return cls(tuple(out))

    @property
    def dim_x(self) -> int:
        return 1

    @property
    def dim_z(self) -> int:
        return len(self.pieces[0].slope)

    def _piece(self, x: Fraction) -> Piece1D | None:
        return next((p for p in self.pieces if p.contains(x)), None)

    def value(self, x):
        x = Fraction(vec(x)[0])
        p = self._piece(x)
        return None if p is None else p.at(x)

    def germ(self, x, u):
        x, u = Fraction(vec(x)[0]), Fraction(vec(u)[0])
        if self._piece(x) is None:
            return None
        if u == 0:
            return Fraction(1), self.value((x,)), tuple(Fraction(0) for _ in range(self.dim_z))
        for p in self.pieces:
            if u > 0 and p.lo <= x < p.hi:
                reach = (p.hi - x) / u
            elif u < 0 and p.lo < x <= p.hi:
                reach = (x - p.lo) / -u
            else:
                continue
            closed_end = p.hi_closed if u > 0 else p.lo_closed
            horizon = reach if closed_end else reach / 2
            return min(horizon, Fraction(1)), p.at(x), smul(u, p.slope)
        return None


# -- set-valued maps --------------------------------------------------------


class SetFun(ABC):
    """A map ``X -> G(Z, C)``."""

    cone: ConeSpec
    dim_x: int
    declared_convex: bool = False

    @abstractmethod
    def evaluate(self, x: Sequence) -> GSet: ...

    def germ(self, x: Sequence, u: Sequence) -> Germ | None:
        """Exact local description along ``u``; ``None`` if unavailable."""
        return None

    def scalar(self, zstar: Sequence, x: Sequence) -> ExtReal:
        return cl.scalarize(self.evaluate(x), zstar)

    def in_domain(self, x: Sequence) -> bool:
        return not self.evaluate(x).is_empty

    @property
    def is_extension(self) -> bool:
        return False


@dataclass(frozen=True, eq=False)
class Extension(SetFun):
    psi: VectorMapPL
    cone: ConeSpec
    declared_convex: bool = False

    @property
    def dim_x(self) -> int:
        return self.psi.dim_x

    @property
    def is_extension(self) -> bool:
        return True

    def evaluate(self, x):
        v = self.psi.value(x)
        if v is None:
            return GSet.empty(self.cone)
        return GSet.point(self.cone, v)

    def scalar(self, zstar, x):
        v = self.psi.value(x)
        if v is None:
            return INF
        return ExtReal(0, -dot(zstar, v))

    def germ(self, x, u):
        g = self.psi.germ(x, u)
        if g is None:
            return Germ(Fraction(1), ())
        horizon, p, d = g
        return Germ(horizon, ((p, d),))


def extend(psi: VectorMapPL, cone: ConeSpec, declared_convex: bool = False) -> Extension:
    if psi.dim_z != cone.dim:
        raise cl.ConeError("vector map and cone have different image dimensions")
    return Extension(psi, cone, declared_convex)


@dataclass(frozen=True, eq=False)
class Tracks(SetFun):
    """``t -> conv{a_k + t b_k} + cone(rays) + C`` on an interval, empty outside."""

    cone: ConeSpec
    lo: Fraction
    hi: Fraction
    lo_closed: bool
    hi_closed: bool
    tracks: tuple[tuple[Point, Point], ...]
    rays: tuple[Point, ...] = ()
    declared_convex: bool = False

    @classmethod
    def of(cls, cone, lo, hi, tracks, rays=(), lo_closed=True, hi_closed=True, declared_convex=False) -> Tracks:
        tr = tuple((vec(a), vec(b)) for a, b in tracks)
        return cls(cone, Fraction(lo), Fraction(hi), lo_closed, hi_closed, tr, tuple(vec(r) for r in rays), declared_convex)

    @property
    def dim_x(self) -> int:
        return 1

    def _inside(self, t: Fraction) -> bool:
        if t < self.lo or t > self.hi:
            return False
        if t == self.lo and not self.lo_closed:
            return False
        if t == self.hi and not self.hi_closed:
            return False
        return True

    def evaluate(self, x):
        t = Fraction(vec(x)[0])
        if not self._inside(t):
            return GSet.empty(self.cone)
        verts = [add(a, smul(t, b)) for a, b in self.tracks]
        return cl.normalize(VRep(self.cone.dim, tuple(verts), self.rays), self.cone)

    def germ(self, x, u):
        t, du = Fraction(vec(x)[0]), Fraction(vec(u)[0])
        if not self._inside(t):
            return None
        if du > 0:
            reach = (self.hi - t) / du
            closed = self.hi_closed
        elif du < 0:
            reach = (t - self.lo) / -du
            closed = self.lo_closed
        else:
            reach, closed = Fraction(1), True
        if reach == 0:
            return Germ(Fraction(1), (), self.rays)
        horizon = min(reach if closed else reach / 2, Fraction(1))
        tr = tuple((add(a, smul(t, b)), smul(du, b)) for a, b in self.tracks)
        return Germ(horizon, tr, self.rays)


@dataclass(frozen=True, eq=False)
class Restriction(SetFun):
    """``t -> f(x0 + t (x - x0))`` on ``[0, 1]``, empty elsewhere."""

    base: SetFun
    x0: Point
    x1: Point

    @property
    def cone(self) -> ConeSpec:  # type: ignore[override]
        return self.base.cone

    @property
    def dim_x(self) -> int:
        return 1

    @property
    def declared_convex(self) -> bool:  # type: ignore[override]
        return self.base.declared_convex

    def _point(self, t: Fraction) -> Point:
        return add(self.x0, smul(t, sub(self.x1, self.x0)))

    def evaluate(self, x):
        t = Fraction(vec(x)[0])
        if not 0 <= t <= 1:
            return GSet.empty(self.cone)
        return self.base.evaluate(self._point(t))

    def scalar(self, zstar, x):
        t = Fraction(vec(x)[0])
        if not 0 <= t <= 1:
            return INF
        return self.base.scalar(zstar, self._point(t))

    def germ(self, x, u):
        t, du = Fraction(vec(x)[0]), Fraction(vec(u)[0])
        if not 0 <= t <= 1:
            return None
        g = self.base.germ(self._point(t), smul(du, sub(self.x1, self.x0)))
        if g is None:
            return None
        if du > 0:
            room = (1 - t) / du
        elif du < 0:
            room = t / -du
        else:
            room = Fraction(1)
        if room == 0:
            return Germ(Fraction(1), (), g.rays)
        return Germ(min(g.horizon, room), g.tracks, g.rays)

    @property
    def is_extension(self) -> bool:
        return self.base.is_extension


def restrict(f: SetFun, x0: Sequence, x: Sequence) -> Restriction:
    return Restriction(f, vec(x0), vec(x))


# -- scalar profiles --------------------------------------------------------


@dataclass(frozen=True)
class PLProfile:
    """Piecewise affine scalar function with ExtReal values; ``+inf`` off the pieces."""

    pieces: tuple[tuple[Fraction, Fraction, bool, bool, Fraction, Fraction], ...]

    @classmethod
    def of(cls, pieces: Iterable[tuple]) -> PLProfile:
        return cls(tuple((Fraction(a), Fraction(b), bool(c), bool(d), Fraction(s), Fraction(o)) for a, b, c, d, s, o in pieces))

    def _find(self, t: Fraction):
        for lo, hi, lc, hc, s, o in self.pieces:
            if lo < t < hi or (t == lo and lc) or (t == hi and hc):
                return s, o
        return None

    def __call__(self, t) -> ExtReal:
        t = Fraction(t)
        hit = self._find(t)
        return INF if hit is None else ExtReal(0, hit[0] * t + hit[1])

    def right_germ(self, t, direction: int = 1) -> tuple[ExtReal, Fraction]:
        """Limit value and slope of ``s -> phi(t + direction*s)`` as ``s`` decreases to 0."""
        t = Fraction(t)
        for lo, hi, lc, hc, s, o in self.pieces:
            if (direction > 0 and lo <= t < hi) or (direction < 0 and lo < t <= hi):
                return ExtReal(0, s * t + o), direction * s
        return INF, Fraction(0)


@dataclass(frozen=True)
class ExprProfile:
    """Closed-form scalar function given as a sympy expression on ``[lo, hi]``."""

    expr: sp.Expr
    var: sp.Symbol
    lo: Fraction
    hi: Fraction

    @classmethod
    def parse(cls, text: str, lo, hi, var: str = "x") -> ExprProfile:
        sym = sp.Symbol(var, real=True)
        return cls(sp.sympify(text, locals={var: sym}), sym, Fraction(lo), Fraction(hi))

    def exact(self, t) -> sp.Expr | ExtReal:
        t = Fraction(t)
        if not self.lo <= t <= self.hi:
            return INF
        return sp.nsimplify(self.expr.subs(self.var, sp.Rational(t.numerator, t.denominator)))

    def __call__(self, t) -> ExtReal:
        """Value as an ExtReal; irrational values raise ``ValueError``."""
        v = self.exact(t)
        if isinstance(v, ExtReal):
            return v
        if not v.is_rational:
            raise ValueError(f"profile value {v} is not rational")
        return ExtReal(0, Fraction(int(v.p), int(v.q)))


@dataclass(frozen=True)
class SampledProfile:
    """Raw samples ``t -> phi(t)``; no limit can be certified from these."""

    samples: tuple[tuple[Fraction, ExtReal], ...]

    @classmethod
    def of(cls, pairs: Iterable[tuple]) -> SampledProfile:
        return cls(tuple(sorted((Fraction(t), ext(v)) for t, v in pairs)))

    def __call__(self, t) -> ExtReal:
        t = Fraction(t)
        for s, v in self.samples:
            if s == t:
                return v
        raise KeyError(f"no sample at {t}")


Profile = PLProfile | ExprProfile | SampledProfile


@dataclass(frozen=True, eq=False)
class Profiles:
    """Scalarizations ``phi_{f,z*}`` of a map on the line, one profile per dual vector."""

    profiles: tuple[tuple[Point, Profile], ...]
    cone: ConeSpec | None = None

    def profile(self, zstar: Sequence) -> Profile:
        z = vec(zstar)
        for w, p in self.profiles:
            if w == z:
                return p
        raise KeyError(f"no profile for {z}")

    def scalar(self, zstar, x) -> ExtReal:
        return self.profile(zstar)(vec(x)[0])

    @property
    def duals(self) -> list[Point]:
        return [w for w, _ in self.profiles]


def scalarization_family(f: SetFun | Profiles) -> Callable[[Sequence, Sequence], ExtReal]:
    """``(z*, x) -> phi_{f,z*}(x)``."""
    return lambda zstar, x: f.scalar(zstar, x)


# -- audits -----------------------------------------------------------------


@dataclass
class ConvexityReport:
    set_violations: list[tuple] = field(default_factory=list)
    scalar_violations: list[tuple] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.set_violations and not self.scalar_violations


def check_convexity_sampled(
    f: SetFun, triples: Iterable[tuple[Sequence, Sequence, object]], duals: Sequence[Sequence] | None = None
) -> ConvexityReport:
    """Test ``f(l x + (1-l) y) ≼ l f(x) + (1-l) f(y)`` and its scalar form on samples."""
    rep = ConvexityReport()
    duals = list(duals) if duals is not None else list(f.cone.dual_base)
    for x, y, lam in triples:
        lam = Fraction(lam)
        if not 0 < lam < 1:
            raise ValueError("convexity weights must lie in (0, 1)")
        x, y = vec(x), vec(y)
        mid = add(smul(lam, x), smul(1 - lam, y))
        lhs = f.evaluate(mid)
        rhs = cl.oplus(cl.scale(lam, f.evaluate(x)), cl.scale(1 - lam, f.evaluate(y)))
        if not cl.leq(lhs, rhs):
            rep.set_violations.append((x, y, lam))
        for z in duals:
            left = f.scalar(z, mid)
            right = inf_add(ext_scale(lam, f.scalar(z, x)), ext_scale(1 - lam, f.scalar(z, y)))
            if left > right:
                rep.scalar_violations.append((x, y, lam, tuple(z)))
        rep.checked += 1
    return rep


def check_lsc_at(phi: Profile, t0, probe: Sequence | None = None) -> Status:
    """Lower semicontinuity of a scalar segment function at ``t0`` along the probe side.

    Exact for piecewise affine and closed-form profiles; raw samples give
    ``Unknown``.  The probe sequence only fixes the side of approach.
    """
    t0 = Fraction(t0)
    direction = -1 if probe and Fraction(probe[0]) < t0 else 1
    if isinstance(phi, SampledProfile):
        return Status.UNKNOWN
    if isinstance(phi, PLProfile):
        limit, _ = phi.right_germ(t0, direction)
        return Status.of(phi(t0) <= limit)
    if isinstance(phi, ExprProfile):
        v0 = phi.exact(t0)
        side = phi.hi if direction > 0 else phi.lo
        if side == t0:
            return Status.HOLDS  # +inf on the probe side
        lim = sp.limit(phi.expr, phi.var, sp.Rational(t0.numerator, t0.denominator), "+" if direction > 0 else "-")
        if isinstance(v0, ExtReal):
            return Status.of(v0.is_neg_inf)
        if isinstance(lim, sp.AccumBounds):
            lim = lim.min
        return Status.of(bool(sp.simplify(v0 - lim) <= 0))
    raise TypeError(f"unsupported profile {type(phi).__name__}")

