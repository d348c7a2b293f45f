"""The conlinear space G(Z, C) of upper closed convex sets over a polyhedral cone.

Elements are closed convex sets with ``A = cl co(A + C)``.  The order is
reverse inclusion, so the empty set is the top and the whole space is the
bottom.  Addition is the Minkowski sum, ``0 * A = C``, infima are closed
convex hulls of unions, suprema are intersections, and the inf-residual is
``A -. B = {z | B + z ⊆ A}``.

Only polyhedral sets are handled here; every operation is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import polyhedral as poly
from .extreal import ExtReal
from .polyhedral import HRep, VRep, dot

__all__ = [
    "ConeError",
    "ConeSpec",
    "GSet",
    "InclusionReport",
    "normalize",
    "oplus",
    "scale",
    "inf_family",
    "sup_family",
    "residual",
    "recession",
    "scalarize",
    "leq",
    "strictly_inside",
    "margin_inside",
    "inclusion_audit",
    "certificate_candidates",
]


class ConeError(ValueError):
    """Raised for invalid cone data or mixing sets over different cones."""


def _normalize_dual(m: Sequence[Fraction], e: Sequence[Fraction]) -> tuple[Fraction, ...]:
    val = dot(m, e)
    if val >= 0:
        raise ConeError(f"dual vector {m} is not strictly negative at the interior point")
    return tuple(x / -val for x in m)


@dataclass(frozen=True)
class ConeSpec:
    """Polyhedral ordering cone ``C = {z | <m_j, z> <= 0}`` with nonempty interior.

    The dual base vectors are rescaled so that ``<m_j, e> = -1`` for the
    interior point ``e``; they then lie in the compact base
    ``W* = {z* in C^- | z*(e) = -1}``.
    """

    dim: int
    dual_base: tuple[tuple[Fraction, ...], ...]
    interior_point: tuple[Fraction, ...]
    unit_ball: VRep
    generators: VRep = field(repr=False)
    hrep: HRep = field(repr=False)

    @classmethod
    def create(
        cls,
        dual_base: Iterable[Iterable],
        interior_point: Iterable | None = None,
        unit_ball: VRep | None = None,
    ) -> ConeSpec:
        ms = [poly.vec(m) for m in dual_base]
        if not ms:
            raise ConeError("dual base must be nonempty (C = Z is not allowed)")
        n = len(ms[0])
        if any(len(m) != n for m in ms):
            raise ConeError("dual base vectors have mixed dimensions")
        if any(not any(m) for m in ms):
            raise ConeError("dual base vectors must be nonzero")
        if interior_point is None:
            e = _find_interior(ms, n)
        else:
            e = poly.vec(interior_point)
            if len(e) != n:
                raise ConeError("interior point has wrong dimension")
            if any(dot(m, e) >= 0 for m in ms):
                raise ConeError(f"{e} is not an interior point of the cone")
        normed = sorted(set(_normalize_dual(m, e) for m in ms))
        h = HRep(n, tuple((m, Fraction(0)) for m in normed))
        gens = poly.h_to_v(h)
        ball = unit_ball if unit_ball is not None else poly.cross_polytope(n)
        if ball.dim != n:
            raise ConeError("unit ball has wrong dimension")
        return cls(n, tuple(normed), e, ball, gens, poly.v_to_h(gens))

    @property
    def finite_dimensional(self) -> bool:
        # compactness of C ∩ (k - C) is automatic in finite dimension
        return True

    def normalize_dual(self, zstar: Sequence) -> tuple[Fraction, ...] | None:
        """Rescale ``zstar`` into W*, or ``None`` if it is not in ``C^- minus {0}``."""
        z = poly.vec(zstar)
        if not self.in_dual(z) or not any(z):
            return None
        return _normalize_dual(z, self.interior_point)

    def in_dual(self, zstar: Sequence) -> bool:
        """``zstar`` is nonpositive on C."""
        return all(dot(zstar, r) <= 0 for r in self.generators.rays) and all(
            dot(zstar, l) == 0 for l in self.generators.lines
        )

    def in_interior(self, z: Sequence) -> bool:
        return all(dot(m, z) < 0 for m in self.dual_base)

    def in_cone(self, z: Sequence) -> bool:
        return all(dot(m, z) <= 0 for m in self.dual_base)


def _find_interior(ms: list[tuple[Fraction, ...]], n: int) -> tuple[Fraction, ...]:
    guess = tuple(-sum((m[i] for m in ms), Fraction(0)) for i in range(n))
    if all(dot(m, guess) < 0 for m in ms):
        return guess
    feas = poly.h_to_v(HRep(n, tuple((m, Fraction(-1)) for m in ms)))
    if feas.is_empty:
        raise ConeError("cone has empty interior")
    return feas.vertices[0]


_EMPTY, _FULL, _POLY = "empty", "full", "poly"


@dataclass(frozen=True, eq=False)
class GSet:
    """An element of G(Z, C), stored with canonical H- and V-representations."""

    cone: ConeSpec
    kind: str
    vrep: VRep
    hrep: HRep

    @classmethod
    def empty(cls, cone: ConeSpec) -> GSet:
        return cls(cone, _EMPTY, VRep.empty(cone.dim), HRep.empty(cone.dim))

    @classmethod
    def full(cls, cone: ConeSpec) -> GSet:
        n = cone.dim
        origin = tuple(Fraction(0) for _ in range(n))
        basis = tuple(tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n))
        return cls(cone, _FULL, VRep(n, (origin,), (), basis), HRep.full(n))

    @classmethod
    def cone_set(cls, cone: ConeSpec) -> GSet:
        return normalize(VRep.of(cone.dim, [[0] * cone.dim]), cone)

    @classmethod
    def point(cls, cone: ConeSpec, z: Sequence) -> GSet:
        """``{z} + C``."""
        return normalize(VRep.of(cone.dim, [z]), cone)

    @classmethod
    def from_hrep(cls, h: HRep, cone: ConeSpec) -> GSet:
        """Wrap a halfspace description; it must already be closed under adding C."""
        v = poly.h_to_v(h)
        g = normalize(v, cone)
        if not g.is_empty and not poly.subset(g.vrep, poly.v_to_h(v)):
            raise ConeError("halfspace set is not upward closed with respect to C")
        return g

    @property
    def is_empty(self) -> bool:
        return self.kind == _EMPTY

    @property
    def is_full(self) -> bool:
        return self.kind == _FULL

    def _key(self):
        return (self.kind, self.hrep.constraints)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GSet):
            return NotImplemented
        return self.cone == other.cone and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        if self.is_empty:
            return "GSet(empty)"
        if self.is_full:
            return "GSet(full)"
        return f"GSet(vertices={self.vrep.vertices}, rays={self.vrep.rays}, lines={self.vrep.lines})"

    def contains(self, z: Sequence) -> bool:
        return poly.contains_point(self.hrep, z)


def _check(*sets: GSet) -> ConeSpec:
    cone = sets[0].cone
    for s in sets[1:]:
        if s.cone is not cone and s.cone != cone:
            raise ConeError("sets live over different cones")
    return cone


def _from_canonical_vrep(v: VRep, cone: ConeSpec) -> GSet:
    if v.is_empty:
        return GSet.empty(cone)
    h = poly.v_to_h(v)
    if h.is_full:
        return GSet.full(cone)
    return GSet(cone, _POLY, poly.h_to_v(h), h)


def normalize(raw: VRep, cone: ConeSpec) -> GSet:
    """``cl co(raw + C)``."""
    if raw.dim != cone.dim:
        raise ConeError("dimension mismatch between set and cone")
    if raw.is_empty:
        return GSet.empty(cone)
    return _from_canonical_vrep(poly.minkowski_sum(raw, cone.generators), cone)


def oplus(a: GSet, b: GSet) -> GSet:
    cone = _check(a, b)
    if a.is_empty or b.is_empty:
        return GSet.empty(cone)
    if a.is_full or b.is_full:
        return GSet.full(cone)
    return _from_canonical_vrep(poly.minkowski_sum(a.vrep, b.vrep), cone)


def scale(t, a: GSet) -> GSet:
    t = Fraction(t)
    if t < 0:
        raise ValueError("scalar must be nonnegative")
    if t == 0:
        return GSet.cone_set(a.cone)
    if a.is_empty or a.is_full:
        return a
    v = a.vrep
    return _from_canonical_vrep(
        VRep(v.dim, tuple(sorted(poly.smul(t, p) for p in v.vertices)), v.rays, v.lines), a.cone
    )


def inf_family(sets: Sequence[GSet], cone: ConeSpec | None = None) -> GSet:
    """Closed convex hull of the union; the empty family gives the top (empty set)."""
    if not sets:
        if cone is None:
            raise ValueError("cone required for an empty family")
        return GSet.empty(cone)
    cone = _check(*sets)
    live = [s for s in sets if not s.is_empty]
    if not live:
        return GSet.empty(cone)
    if any(s.is_full for s in live):
        return GSet.full(cone)
    verts = sorted({p for s in live for p in s.vrep.vertices})
    rays = tuple(r for s in live for r in s.vrep.rays)
    lines = tuple(l for s in live for l in s.vrep.lines)
    return normalize(VRep(cone.dim, tuple(verts), rays, lines), cone)


def sup_family(sets: Sequence[GSet], cone: ConeSpec | None = None) -> GSet:
    """Intersection; the empty family gives the bottom (whole space)."""
    if not sets:
        if cone is None:
            raise ValueError("cone required for an empty family")
        return GSet.full(cone)
    cone = _check(*sets)
    if any(s.is_empty for s in sets):
        return GSet.empty(cone)
    h = HRep.full(cone.dim)
    for s in sets:
        if not s.is_full:
            h = HRep(cone.dim, h.constraints + s.hrep.constraints)
    return _from_canonical_vrep(poly.h_to_v(h), cone)


def residual(a: GSet, b: GSet) -> GSet:
    """``a -. b = {z | b + z ⊆ a}``."""
    cone = _check(a, b)
    if b.is_empty or a.is_full:
        return GSet.full(cone)
    if a.is_empty:
        return GSet.empty(cone)
    rows = []
    for n, c in a.hrep.constraints:
        s = poly.support(n, b.vrep)
        if s.is_pos_inf:
            return GSet.empty(cone)
        rows.append((n, c - s.value))
    return _from_canonical_vrep(poly.h_to_v(HRep(cone.dim, tuple(rows))), cone)


def recession(a: GSet) -> GSet:
    """``0+A = {z | A + z ⊆ A}``; the recession cone of the empty set is empty."""
    if a.is_empty or a.is_full:
        return a
    n = a.cone.dim
    origin = tuple(Fraction(0) for _ in range(n))
    return normalize(VRep(n, (origin,), a.vrep.rays, a.vrep.lines), a.cone)


def scalarize(a: GSet, zstar: Sequence) -> ExtReal:
    """``inf{-<z*, z> | z in A} = -sigma(z*|A)``."""
    return -poly.support(poly.vec(zstar), a.vrep)


def leq(a: GSet, b: GSet) -> bool:
    """``a ≼ b`` iff ``b ⊆ a``."""
    _check(a, b)
    return poly.subset(b.vrep, a.hrep)


def strictly_inside(a: GSet, b: GSet) -> bool:
    """``a ⊆ int b``."""
    _check(a, b)
    return poly.strict_subset(a.vrep, b.hrep)


def margin_inside(a: GSet, b: GSet) -> Fraction | None:
    """Largest ``eps`` with ``a + eps*U0 ⊆ b`` when positive, else ``None``.

    Uses ``sigma(n_i | a + eps U0) = sigma(n_i|a) + eps sigma(n_i|U0)``; a set
    with finitely many constraints admits some ``eps > 0`` iff every margin
    ``c_i - sigma(n_i|a)`` is strictly positive.  The whole space admits any
    ``eps``; this is reported as the margin 1.
    """
    _check(a, b)
    if a.is_empty:
        return Fraction(1) if not b.is_empty else None
    if b.is_empty:
        return None
    if b.is_full:
        return Fraction(1)
    best: Fraction | None = None
    for n, c in b.hrep.constraints:
        s = poly.support(n, a.vrep)
        if not s.is_finite or s.value >= c:
            return None
        u = poly.support(n, a.cone.unit_ball)
        ratio = (c - s.value) / u.value
        best = ratio if best is None else min(best, ratio)
    return best


def certificate_candidates(cone: ConeSpec, *sets: GSet) -> list[tuple[Fraction, ...]]:
    """M* together with the facet normals of ``sets``, all rescaled into W*.

    For polyhedral sets a separating functional, when one exists, can always
    be taken among the facet normals of the set being separated from, so
    this finite list is complete for the certificate searches below.
    """
    out = list(cone.dual_base)
    seen = set(out)
    for s in sets:
        for n, _ in s.hrep.constraints:
            w = cone.normalize_dual(n)
            if w is not None and w not in seen:
                seen.add(w)
                out.append(w)
    return out


@dataclass(frozen=True)
class InclusionReport:
    not_in_int: bool
    scalar_cert: tuple[Fraction, ...] | None
    robust_not_subset: bool
    margin: Fraction | None

    @property
    def chain_ok(self) -> bool:
        if self.not_in_int and self.scalar_cert is None:
            return False
        if self.scalar_cert is not None and not self.robust_not_subset:
            return False
        return True


def inclusion_audit(a: GSet, b: GSet) -> InclusionReport:
    """Evaluate the chain  A ⊄ int B  =>  scalar certificate  =>  A + U ⊄ B."""
    cone = _check(a, b)
    not_in_int = not strictly_inside(a, b)
    cert = None
    for z in certificate_candidates(cone, a, b):
        sa, sb = scalarize(a, z), scalarize(b, z)
        if sa <= sb and not sb.is_neg_inf:
            cert = z
            break
    margin = margin_inside(a, b)
    report = InclusionReport(not_in_int, cert, margin is None, margin)
    if not report.chain_ok:
        raise AssertionError(f"inclusion chain violated: {report}")
    return report

