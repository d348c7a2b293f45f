"""Two worked examples whose ordering cone has empty interior.

Both sit outside :class:`~setvi.conlinear.ConeSpec`, which requires int C
to be nonempty, so they get small dedicated models here.

* The circle map ``x -> [-sqrt(1 - x^2), sqrt(1 - x^2)]`` in G(R, {0}).  Its
  set derivative at 0 is empty while every scalarization has derivative 0,
  so reassembling from scalar derivatives gives {0}: a weak-regularity gap.
* The parabola epigraph A and the tangent-line sets B_N under
  C = cone{(0, 1)}.  Each truncation B_N contains A with a positive robust
  margin 1/(2N^2), which vanishes as N grows, while the scalar gaps
  ``-sigma(z*|A) - (-sigma(z*|B_N))`` stay bounded away from zero.  In the
  limit the robust non-inclusion holds but no scalar certificate exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy as sp

from . import polyhedral as poly
from .dini import scalar_dini
from .extreal import ExtReal
from .polyhedral import HRep
from .setfun import ExprProfile

__all__ = [
    "Interval",
    "interval_residual",
    "circle_value",
    "circle_quotient",
    "circle_profile",
    "CircleReport",
    "circle_report",
    "parabola_scalar",
    "tangent_set",
    "tangent_scalar",
    "tangent_margin",
    "InclusionTruncation",
    "inclusion_truncation",
]


# -- G(R, {0}): closed intervals ---------------------------------------------


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` with exact sympy endpoints, or empty."""

    lo: sp.Expr | None
    hi: sp.Expr | None

    @classmethod
    def empty(cls) -> Interval:
        return cls(None, None)

    @property
    def is_empty(self) -> bool:
        return self.lo is None

    def scale(self, t) -> Interval:
        if self.is_empty:
            return self
        t = sp.nsimplify(t)
        return Interval(sp.simplify(t * self.lo), sp.simplify(t * self.hi))

    def contains(self, z) -> bool:
        return not self.is_empty and bool(self.lo <= z) and bool(z <= self.hi)


def interval_residual(a: Interval, b: Interval) -> Interval:
    """``a -. b = {z : b + z ⊆ a}``; ``[a1, a2] -. [b1, b2] = [a1 - b1, a2 - b2]`` when ordered."""
    if b.is_empty:
        raise ValueError("residual by the empty set is the whole line")
    if a.is_empty:
        return Interval.empty()
    lo, hi = sp.simplify(a.lo - b.lo), sp.simplify(a.hi - b.hi)
    if bool(lo > hi):
        return Interval.empty()
    return Interval(lo, hi)


def circle_value(x) -> Interval:
    x = sp.nsimplify(x)
    if bool(x < -1) or bool(x > 1):
        return Interval.empty()
    r = sp.sqrt(1 - x**2)
    return Interval(-r, r)


def circle_quotient(x, u, t) -> Interval:
    """``(1/t)(f(x + t u) -. f(x))`` for the circle map."""
    x, u, t = (sp.nsimplify(v) for v in (x, u, t))
    return interval_residual(circle_value(x + t * u), circle_value(x)).scale(1 / t)


def circle_profile(s) -> ExprProfile:
    """``phi_s(x) = inf{-s z : z in f(x)} = -|s| sqrt(1 - x^2)`` on [-1, 1]."""
    s = Fraction(s)
    return ExprProfile.parse(f"-{abs(s)}*sqrt(1 - x**2)", -1, 1)


@dataclass(frozen=True)
class CircleReport:
    quotients_empty: bool
    set_derivative_empty: bool
    scalar: dict
    assembled: tuple[Fraction, Fraction] | None
    gap: bool


def circle_report(x=0, u=1, duals: Sequence = (-2, -1, Fraction(-1, 2), Fraction(1, 2), 1, 3), steps: Sequence | None = None) -> CircleReport:
    """Set derivative from quotients, scalar derivatives, and their reassembly.

    Every quotient along ``steps`` is empty; so are the upper and lower
    derivatives, whose tails are families of empty sets.  Scalar derivatives
    are exact symbolic limits.  The reassembly intersects the half-lines
    ``{z : phi'_s <= -s z}``.
    """
    steps = steps if steps is not None else [Fraction(1, 2**k) for k in range(1, 21)]
    empties = all(circle_quotient(x, u, t).is_empty for t in steps)
    scalar = {Fraction(s): scalar_dini(circle_profile(s), x, u) for s in duals}
    lo, hi = None, None
    feasible = True
    for s, d in scalar.items():
        v = d.upper
        if not v.is_finite:
            if v.is_pos_inf:
                feasible = False
            continue
        # phi'_s <= -s z  reads  z <= -phi'_s / s  for s > 0  and  z >= -phi'_s / s  for s < 0
        bound = -v.value / s
        if s > 0:
            hi = bound if hi is None else min(hi, bound)
        else:
            lo = bound if lo is None else max(lo, bound)
    assembled = None
    if feasible and lo is not None and hi is not None and lo <= hi:
        assembled = (lo, hi)
    gap = empties and assembled is not None
    return CircleReport(empties, empties, scalar, assembled, gap)


# -- parabola against tangent lines ------------------------------------------


def parabola_scalar(s) -> ExtReal:
    """``-sigma((s, -1) | A)`` for ``A = {y >= x^2}``: ``inf_x x^2 - s x = -s^2/4``."""
    s = Fraction(s)
    return ExtReal(0, -s * s / 4)


def tangent_set(n_max: int) -> HRep:
    """``B_N = {y >= max(+-2n x - n^2 - 1/n), n <= N}``."""
    rows = []
    for n in range(1, n_max + 1):
        c = Fraction(n * n) + Fraction(1, n)
        rows.append(((2 * n, -1), c))
        rows.append(((-2 * n, -1), c))
    return HRep.of(2, rows)


def tangent_scalar(s, n_max: int) -> ExtReal:
    """``-sigma((s, -1) | B_N)`` from the vertices of B_N."""
    v = poly.h_to_v(tangent_set(n_max))
    return -poly.support((Fraction(s), Fraction(-1)), v)


def tangent_margin(n_max: int) -> Fraction:
    """Largest ``eps`` with ``A + eps U0 ⊆ B_N``, U0 the l1 unit ball.

    For the facet normal ``(+-2n, -1)`` the support of A is ``n^2`` and that
    of U0 is ``2n``, so the slack ratio is ``(1/n) / (2n)``.
    """
    ratios = []
    for n in range(1, n_max + 1):
        slack = Fraction(1, n)  # (n^2 + 1/n) - sup{2n|x| - x^2}
        ratios.append(slack / (2 * n))  # over sup{<(+-2n, -1), u> : |u|_1 <= 1}
    return min(ratios)


@dataclass(frozen=True)
class InclusionTruncation:
    n_max: int
    margins: tuple[Fraction, ...]
    scalar_gaps: dict
    certificate_free: bool


def inclusion_truncation(n_max: int = 8, probes: Sequence | None = None) -> InclusionTruncation:
    """Margins ``eps_N`` for N = 1..n_max and scalar gaps at probe slopes.

    ``scalar_gaps[(s, N)] = -sigma(z*|A) - (-sigma(z*|B_N))`` for
    ``z* = (s, -1)``; a positive value (or ``+inf`` when B_N is unbounded
    below in that direction) means z* is no certificate.
    """
    probes = probes if probes is not None else [Fraction(k, 2) for k in range(-4 * n_max, 4 * n_max + 1)]
    margins = tuple(tangent_margin(n) for n in range(1, n_max + 1))
    gaps = {}
    free = True
    for n in range(1, n_max + 1):
        for s in probes:
            a, b = parabola_scalar(s), tangent_scalar(s, n)
            gap = ExtReal(0, a.value - b.value) if b.is_finite else ExtReal(1)
            gaps[(Fraction(s), n)] = gap
            if not gap > 0:
                free = False
    return InclusionTruncation(n_max, margins, gaps, free)

