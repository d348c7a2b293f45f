"""Upper and lower Dini directional derivatives.

For a set-valued map the differential quotient is the scaled inf-residual

    Q(t) = (1/t) (f(x + t u) -. f(x)),

and the upper/lower derivatives are ``inf_s sup_{t<=s} Q(t)`` and
``sup_s inf_{t<=s} Q(t)`` in G(Z, C) (sup = intersection, inf = closed
convex hull of the union).  Scalar functions use the same recipe with
inf-residuation on the extended reals.

Exact values come from germs (see :mod:`setvi.setfun`); everything else is
evaluated along a finite decreasing sequence of step sizes and flagged as
inexact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import sympy as sp

from . import conlinear as cl
from . import polyhedral as poly
from .conlinear import ConeSpec, GSet
from .extreal import INF, NEG_INF, ExtReal, inf_residual, scale
from .polyhedral import HRep, VRep, add, dot, smul, vec
from .setfun import ExprProfile, Germ, PLProfile, Profiles, SampledProfile, SetFun
from .tristate import Status

__all__ = [
    "DiniScalarResult",
    "DiniSetResult",
    "default_steps",
    "harmonic_steps",
    "quotient",
    "scalar_quotient",
    "scalar_dini_germ",
    "scalar_dini_sampled",
    "scalar_dini_expr",
    "scalar_dini",
    "scalar_derivative",
    "set_dini_convex",
    "set_dini_sampled",
    "set_derivative",
    "assemble_halfspaces",
    "assemble_from_scalar",
    "RegularityReport",
    "regularity_audit",
]


@dataclass(frozen=True)
class DiniScalarResult:
    upper: ExtReal
    lower: ExtReal
    exact: bool

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise AssertionError(f"lower derivative {self.lower} exceeds upper {self.upper}")

    @property
    def exists(self) -> bool:
        return self.upper == self.lower

    @property
    def value(self) -> ExtReal:
        if not self.exists:
            raise ValueError("the derivative does not exist")
        return self.upper


@dataclass(frozen=True)
class DiniSetResult:
    upper: GSet
    lower: GSet
    exact: bool
    via: str
    stable_tails: int | None = None

    def __post_init__(self) -> None:
        if not cl.leq(self.lower, self.upper):
            raise AssertionError("upper derivative is not contained in the lower one")

    @property
    def existence(self) -> str:
        if cl.leq(self.upper, self.lower):
            return "Exists" if self.exact else "Unknown-at-truncation"
        return "NotExists"


def default_steps(n: int = 20) -> list[Fraction]:
    """``t_k = 1/2^k`` for ``k = 1..n``."""
    return [Fraction(1, 2**k) for k in range(1, n + 1)]


def harmonic_steps(n: int) -> list[Fraction]:
    """``t_k = 1/k`` for ``k = 1..n``."""
    return [Fraction(1, k) for k in range(1, n + 1)]


def _check_steps(ts: Sequence) -> list[Fraction]:
    ts = [Fraction(t) for t in ts]
    if not ts or any(t <= 0 for t in ts) or any(a <= b for a, b in zip(ts, ts[1:])):
        raise ValueError("step sequence must be positive and strictly decreasing")
    return ts


# -- scalar ---------------------------------------------------------------


def scalar_quotient(phi_t: ExtReal, phi_0: ExtReal, t) -> ExtReal:
    return scale(Fraction(1) / Fraction(t), inf_residual(phi_t, phi_0))


def scalar_dini_germ(phi0: ExtReal, limit: ExtReal, slope: Fraction) -> DiniScalarResult:
    """Exact derivative when ``phi(t) = limit + slope*t`` on a right neighbourhood of 0."""
    if phi0.is_pos_inf:
        return DiniScalarResult(NEG_INF, NEG_INF, True)
    if limit.is_finite and phi0.is_finite:
        if limit.value > phi0.value:
            d = INF
        elif limit.value < phi0.value:
            d = NEG_INF
        else:
            d = ExtReal(0, Fraction(slope))
    else:
        # the residual does not depend on t once an infinity is involved
        d = inf_residual(limit, phi0)
    return DiniScalarResult(d, d, True)


def scalar_dini_sampled(phi0: ExtReal, samples: Sequence[tuple[Fraction, ExtReal]]) -> DiniScalarResult:
    """Tail limsup/liminf of the quotients over a finite decreasing sequence."""
    ts = _check_steps([t for t, _ in samples])
    if phi0.is_pos_inf:
        return DiniScalarResult(NEG_INF, NEG_INF, False)
    qs = [scalar_quotient(v, phi0, t) for t, (_, v) in zip(ts, samples)]
    starts = range(0, len(qs) // 2 + 1)
    upper = min(max(qs[i:]) for i in starts)
    lower = max(min(qs[i:]) for i in starts)
    return DiniScalarResult(upper, lower, False)


def _sympy_to_ext(v) -> ExtReal:
    if v is sp.oo:
        return INF
    if v is -sp.oo:
        return NEG_INF
    v = sp.nsimplify(v)
    if not v.is_rational:
        raise ValueError(f"derivative {v} is not rational")
    return ExtReal(0, Fraction(int(v.p), int(v.q)))


def scalar_dini_expr(phi: ExprProfile, x, direction) -> DiniScalarResult:
    """Exact Dini derivatives of a closed-form profile via symbolic limits."""
    x, u = Fraction(x), Fraction(direction)
    v0 = phi.exact(x)
    if isinstance(v0, ExtReal) and v0.is_pos_inf:
        return DiniScalarResult(NEG_INF, NEG_INF, True)
    if u == 0:
        return DiniScalarResult(ExtReal(0, Fraction(0)), ExtReal(0, Fraction(0)), True)
    edge = phi.hi if u > 0 else phi.lo
    if edge == x:
        return DiniScalarResult(INF, INF, True)
    t = sp.Symbol("t", positive=True)
    xs = sp.Rational(x.numerator, x.denominator)
    us = sp.Rational(u.numerator, u.denominator)
    q = (phi.expr.subs(phi.var, xs + t * us) - v0) / t
    lim = sp.limit(q, t, 0, "+")
    if isinstance(lim, sp.AccumBounds):
        return DiniScalarResult(_sympy_to_ext(lim.max), _sympy_to_ext(lim.min), True)
    d = _sympy_to_ext(lim)
    return DiniScalarResult(d, d, True)


def scalar_dini(
    phi: PLProfile | ExprProfile | SampledProfile,
    x=0,
    direction=1,
    steps: Sequence | None = None,
) -> DiniScalarResult:
    """Dini derivative of a scalar profile at ``x`` along ``direction``.

    Piecewise affine and closed-form profiles are exact; sampled profiles use
    the step sequence (default: the sampled abscissae beyond ``x``).
    """
    x, u = Fraction(x), Fraction(direction)
    if isinstance(phi, PLProfile):
        phi0 = phi(x)
        if u == 0:
            return scalar_dini_germ(phi0, phi0, Fraction(0))
        limit, slope = phi.right_germ(x, 1 if u > 0 else -1)
        return scalar_dini_germ(phi0, limit, slope * abs(u))
    if isinstance(phi, ExprProfile):
        return scalar_dini_expr(phi, x, u)
    if isinstance(phi, SampledProfile):
        phi0 = phi(x)
        if steps is None:
            pts = [(s - x) / u for s, _ in phi.samples if (s - x) / u > 0]
            steps = sorted(pts, reverse=True)
        samples = [(Fraction(t), phi(x + Fraction(t) * u)) for t in steps]
        return scalar_dini_sampled(phi0, samples)
    raise TypeError(f"unsupported profile {type(phi).__name__}")


def _germ_scalar(zstar: Sequence, germ: Germ, cone: ConeSpec) -> tuple[ExtReal, Fraction]:
    """Limit value and slope of ``t -> phi_{f,z*}(x + t u)`` from a germ."""
    if germ.off_domain:
        return INF, Fraction(0)
    if any(dot(zstar, r) > 0 for r in germ.rays) or not cone.in_dual(zstar):
        return NEG_INF, Fraction(0)
    vals = [(-dot(zstar, p), -dot(zstar, d)) for p, d in germ.tracks]
    alpha = min(v for v, _ in vals)
    beta = min(s for v, s in vals if v == alpha)
    return ExtReal(0, alpha), beta


def scalar_derivative(
    f: SetFun | Profiles,
    zstar: Sequence,
    x: Sequence,
    u: Sequence,
    steps: Sequence | None = None,
) -> DiniScalarResult:
    """Dini derivative of ``phi_{f,z*}`` at ``x`` along ``u``."""
    zstar, x, u = vec(zstar), vec(x), vec(u)
    if isinstance(f, Profiles):
        if len(x) != 1:
            raise ValueError("profiles live on the line")
        return scalar_dini(f.profile(zstar), x[0], u[0], steps)
    phi0 = f.scalar(zstar, x)
    germ = f.germ(x, u) if steps is None else None
    if germ is not None:
        limit, slope = _germ_scalar(zstar, germ, f.cone)
        return scalar_dini_germ(phi0, limit, slope)
    ts = _check_steps(steps if steps is not None else default_steps())
    samples = [(t, f.scalar(zstar, add(x, smul(t, u)))) for t in ts]
    return scalar_dini_sampled(phi0, samples)


# -- set-valued -------------------------------------------------------------


def quotient(f: SetFun, x: Sequence, u: Sequence, t) -> GSet:
    """``(1/t)(f(x + t u) -. f(x))``."""
    t = Fraction(t)
    if t <= 0:
        raise ValueError("step must be positive")
    x, u = vec(x), vec(u)
    base = f.evaluate(x)
    if base.is_empty:
        return GSet.full(f.cone)
    return cl.scale(1 / t, cl.residual(f.evaluate(add(x, smul(t, u))), base))


def _germ_derivative(f: SetFun, x: Sequence, germ: Germ) -> GSet | None:
    cone = f.cone
    base = f.evaluate(x)
    if base.is_empty:
        return GSet.full(cone)
    if germ.off_domain:
        return GSet.empty(cone)
    if len(germ.tracks) == 1 and not germ.rays and f.is_extension:
        # f(x + t u) = p + t d + C: fixed normals M*, offsets affine in t
        (p, d), = germ.tracks
        rows = []
        for m in cone.dual_base:
            jump = dot(m, p) - poly.support(m, base.vrep).value
            if jump < 0:
                return GSet.empty(cone)
            if jump == 0:
                rows.append((m, dot(m, d)))
        return GSet.from_hrep(HRep(cone.dim, tuple(rows)), cone)
    if not f.declared_convex:
        return None
    # continuous convex track family: intersect conv{d_k : p_k = v} + tangent cone at v
    start = cl.normalize(VRep(cone.dim, tuple(p for p, _ in germ.tracks), germ.rays), cone)
    if start != base or base.is_full or base.vrep.lines:
        return None
    parts = []
    for v in base.vrep.vertices:
        ds = [d for p, d in germ.tracks if p == v]
        if not ds:
            return None
        tangent = [poly.sub(w, v) for w in base.vrep.vertices if w != v]
        parts.append(cl.normalize(VRep(cone.dim, tuple(ds), tuple(tangent) + base.vrep.rays), cone))
    return cl.sup_family(parts, cone)


def set_dini_convex(f: SetFun, x: Sequence, u: Sequence) -> DiniSetResult:
    """Exact derivative from the germ; falls back to sampling if there is none.

    The quotient is monotone in ``t`` below the germ horizon, so upper and
    lower derivatives coincide.  The monotonicity is checked on a short
    ladder of steps.
    """
    x, u = vec(x), vec(u)
    germ = f.germ(x, u)
    d = _germ_derivative(f, x, germ) if germ is not None else None
    if d is None:
        return set_dini_sampled(f, x, u, default_steps())
    if f.declared_convex and not germ.off_domain and not f.evaluate(x).is_empty:
        ladder = [germ.horizon / 2**k for k in range(3)]
        qs = [quotient(f, x, u, t) for t in ladder]
        for small, big in zip(qs[1:], qs):
            if not cl.leq(small, big):
                raise AssertionError("difference quotient is not monotone along the germ")
        if not cl.leq(d, qs[-1]):
            raise AssertionError("derivative is not below the quotients")
    return DiniSetResult(d, d, True, "primal-quotient")


def set_dini_sampled(f: SetFun, x: Sequence, u: Sequence, ts: Sequence) -> DiniSetResult:
    """Tail limsup/liminf of the set quotients over a finite decreasing sequence."""
    ts = _check_steps(ts)
    x, u = vec(x), vec(u)
    qs = [quotient(f, x, u, t) for t in ts]
    cone = f.cone
    n = len(qs)
    sup_tail: list[GSet] = [None] * n  # type: ignore[list-item]
    inf_tail: list[GSet] = [None] * n  # type: ignore[list-item]
    sup_tail[-1] = inf_tail[-1] = qs[-1]
    for i in range(n - 2, -1, -1):
        sup_tail[i] = cl.sup_family([qs[i], sup_tail[i + 1]], cone)
        inf_tail[i] = cl.inf_family([qs[i], inf_tail[i + 1]], cone)
    starts = range(0, n // 2 + 1)
    upper = cl.inf_family([sup_tail[i] for i in starts], cone)
    lower = cl.sup_family([inf_tail[i] for i in starts], cone)
    stable = 0
    for i in reversed(starts):
        if sup_tail[i] == sup_tail[n // 2] and inf_tail[i] == inf_tail[n // 2]:
            stable += 1
        else:
            break
    return DiniSetResult(upper, lower, False, "primal-quotient", stable)


def set_derivative(f: SetFun, x: Sequence, u: Sequence, steps: Sequence | None = None) -> DiniSetResult:
    if steps is not None:
        return set_dini_sampled(f, x, u, steps)
    return set_dini_convex(f, x, u)


def assemble_halfspaces(derivs: Mapping[tuple, ExtReal], dim: int, finite_only: bool = True) -> HRep:
    """``{z | phi'_{z*} <= -<z*, z>}`` over the given dual vectors.

    With ``finite_only`` the infinite values are skipped, which is the
    finite-scalarization representation of a nonempty set; if every value
    is ``+inf`` the result is empty.  Without it, ``+inf`` makes the result
    empty and ``-inf`` imposes nothing.
    """
    vals = list(derivs.values())
    if vals and all(v.is_pos_inf for v in vals):
        return HRep.empty(dim)
    rows = []
    for z, v in derivs.items():
        if v.is_pos_inf:
            if finite_only:
                continue
            return HRep.empty(dim)
        if v.is_neg_inf:
            continue
        rows.append((vec(z), -v.value))
    return HRep(dim, tuple(rows))


def assemble_from_scalar(derivs: Mapping[tuple, ExtReal], cone: ConeSpec, finite_only: bool = True) -> GSet:
    h = assemble_halfspaces(derivs, cone.dim, finite_only)
    v = poly.h_to_v(h)
    return cl.normalize(v, cone) if not v.is_empty else GSet.empty(cone)


@dataclass
class RegularityReport:
    duals: list[tuple]
    upper_scalar: dict = field(default_factory=dict)
    lower_scalar: dict = field(default_factory=dict)
    upper_support: dict = field(default_factory=dict)
    lower_support: dict = field(default_factory=dict)
    sr: dict = field(default_factory=dict)
    wr: Status = Status.UNKNOWN
    exact: bool = True

    @property
    def sr_all(self) -> Status:
        vals = list(self.sr.values())
        if any(v is Status.FAILS for v in vals):
            return Status.FAILS
        if all(v is Status.HOLDS for v in vals):
            return Status.HOLDS
        return Status.UNKNOWN

    def gaps(self) -> list[tuple[tuple, ExtReal, ExtReal]]:
        """``(z*, phi'^up, -sigma(z*|f^up))`` where the inequality is strict."""
        return [
            (z, self.upper_scalar[z], self.upper_support[z])
            for z in self.duals
            if self.upper_scalar[z] != self.upper_support[z]
        ]


def regularity_audit(
    f: SetFun,
    x: Sequence,
    u: Sequence,
    steps: Sequence | None = None,
    extra_duals: Sequence[Sequence] = (),
) -> RegularityReport:
    """Compare scalar derivatives with the supports of the set derivatives.

    ``phi'_{z*} <= -sigma(z*|f')`` must hold for both the upper and the
    lower derivative; (SR) is equality, (WR) is recovery of the lower
    derivative from all scalar lower derivatives.
    """
    x, u = vec(x), vec(u)
    dres = set_derivative(f, x, u, steps)
    duals = list(dict.fromkeys([tuple(m) for m in f.cone.dual_base] + [tuple(vec(z)) for z in extra_duals]))
    rep = RegularityReport(duals, exact=dres.exact)
    for z in duals:
        s = scalar_derivative(f, z, x, u, steps)
        up_sup = cl.scalarize(dres.upper, z)
        lo_sup = cl.scalarize(dres.lower, z)
        if s.upper > up_sup or s.lower > lo_sup:
            raise AssertionError(f"scalarization inequality violated at {z}")
        rep.upper_scalar[z], rep.lower_scalar[z] = s.upper, s.lower
        rep.upper_support[z], rep.lower_support[z] = up_sup, lo_sup
        rep.sr[z] = Status.of(s.upper == up_sup and s.lower == lo_sup)
    lower_map = {z: rep.lower_scalar[z] for z in duals}
    assembled = assemble_from_scalar(lower_map, f.cone, finite_only=False)
    rep.wr = Status.of(assembled == dres.lower)
    if f.is_extension and f.declared_convex and dres.exact and rep.sr_all is not Status.HOLDS:
        raise AssertionError("strong regularity must hold for convex extensions")
    return rep
