"""Randomized algebraic law suites for G(Z, C).

Each ``check_*`` returns ``True`` when the law holds on the given data.
Generators are seeded ``random.Random`` instances so every run is
reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import conlinear as cl
from .conlinear import ConeSpec, GSet
from .extreal import INF, NEG_INF, ExtReal
from .polyhedral import VRep

__all__ = [
    "random_cone",
    "random_gset",
    "random_dual",
    "random_scalar",
    "check_adjunction",
    "check_calc_conlin",
    "check_scal_inf",
    "check_scal_sup",
    "check_lattice",
    "sup_strictness_witness",
    "LawReport",
    "run_law_suite",
]


def random_cone(rng: random.Random, dim: int) -> ConeSpec:
    """Pareto cone or a random polyhedral cone with e_n in its interior."""
    if dim == 1 or rng.random() < 0.3:
        return ConeSpec.create([tuple(-1 if i == j else 0 for i in range(dim)) for j in range(dim)])
    ms = set()
    while len(ms) < dim + rng.randint(0, 2):
        head = tuple(rng.randint(-2, 2) for _ in range(dim - 1))
        ms.add(head + (-(sum(abs(c) for c in head) + rng.randint(1, 2)),))
    return ConeSpec.create(sorted(ms), interior_point=tuple(0 for _ in range(dim - 1)) + (1,))


def random_gset(rng: random.Random, cone: ConeSpec, special: float = 0.08, box: int = 3) -> GSet:
    """Random element of G(Z, C): mostly polyhedra, occasionally Empty/Full/C."""
    r = rng.random()
    if r < special / 2:
        return GSet.empty(cone)
    if r < special:
        return GSet.full(cone)
    if r < 1.5 * special:
        return GSet.cone_set(cone)
    n = cone.dim
    verts = [tuple(Fraction(rng.randint(-box, box), rng.choice((1, 1, 2))) for _ in range(n)) for _ in range(rng.randint(1, 3))]
    rays = []
    if rng.random() < 0.3:
        rays.append(tuple(rng.randint(-1, 1) for _ in range(n)))
        if not any(rays[-1]):
            rays.pop()
    return cl.normalize(VRep.of(n, verts, rays), cone)


def random_dual(rng: random.Random, cone: ConeSpec) -> tuple[Fraction, ...]:
    """Random point of W*: a convex combination of dual-base vectors."""
    w = [Fraction(rng.randint(0, 4)) for _ in cone.dual_base]
    if not any(w):
        w[rng.randrange(len(w))] = Fraction(1)
    tot = sum(w)
    return tuple(sum(wi * m[k] for wi, m in zip(w, cone.dual_base)) / tot for k in range(cone.dim))


def random_scalar(rng: random.Random) -> Fraction:
    """Random rational in (0, 4]."""
    den = rng.choice((1, 2, 4))
    return Fraction(rng.randint(1, 4 * den), den)


def check_adjunction(a: GSet, b: GSet, m: GSet) -> bool:
    """``A ≼ B ⊕ M  iff  A -. B ≼ M``."""
    return cl.leq(a, cl.oplus(b, m)) == cl.leq(cl.residual(a, b), m)


def check_calc_conlin(a: GSet, b: GSet, d: GSet, e: GSet, t, s) -> bool:
    """``(tA ⊕ sB) -. (tD ⊕ sE)  ≼  t(A -. D) ⊕ s(B -. E)``."""
    lhs = cl.residual(cl.oplus(cl.scale(t, a), cl.scale(s, b)), cl.oplus(cl.scale(t, d), cl.scale(s, e)))
    rhs = cl.oplus(cl.scale(t, cl.residual(a, d)), cl.scale(s, cl.residual(b, e)))
    return cl.leq(lhs, rhs)


def check_scal_inf(family: Sequence[GSet], zstar: Sequence, cone: ConeSpec) -> bool:
    """``-sigma(z*|inf F) = inf{-sigma(z*|A) : A in F}``."""
    lhs = cl.scalarize(cl.inf_family(family, cone), zstar)
    rhs = min((cl.scalarize(a, zstar) for a in family), default=INF)
    return lhs == rhs


def check_scal_sup(family: Sequence[GSet], zstar: Sequence, cone: ConeSpec) -> bool:
    """``-sigma(z*|sup F) >= sup{-sigma(z*|A) : A in F}``."""
    lhs = cl.scalarize(cl.sup_family(family, cone), zstar)
    rhs = max((cl.scalarize(a, zstar) for a in family), default=NEG_INF)
    return lhs >= rhs


def check_lattice(a: GSet, b: GSet, c: GSet) -> bool:
    """Bounds, commutativity, associativity, neutral/absorbing elements, distributivity."""
    cone = a.cone
    inf_ab = cl.inf_family([a, b])
    sup_ab = cl.sup_family([a, b])
    checks = [
        cl.leq(inf_ab, a) and cl.leq(inf_ab, b),
        cl.leq(a, sup_ab) and cl.leq(b, sup_ab),
        cl.oplus(a, b) == cl.oplus(b, a),
        cl.oplus(cl.oplus(a, b), c) == cl.oplus(a, cl.oplus(b, c)),
        cl.oplus(a, GSet.cone_set(cone)) == cl.normalize(a.vrep, cone) if not (a.is_empty or a.is_full) else True,
        cl.oplus(a, GSet.empty(cone)).is_empty,
        cl.oplus(a, cl.inf_family([b, c])) == cl.inf_family([cl.oplus(a, b), cl.oplus(a, c)]),
        cl.scale(0, a) == GSet.cone_set(cone) if not a.is_empty else True,
    ]
    return all(checks)


def sup_strictness_witness() -> tuple[ExtReal, ExtReal]:
    """``A = {y >= -x}``, ``B = {y >= x}``, ``z* = (0, -1)`` under ``C = {y >= |x|}``.

    Returns ``(sup{-sigma(z*|A), -sigma(z*|B)}, -sigma(z*|A ∩ B))``, which
    is ``(-inf, 0)``: the supremum inequality is strict.
    """
    cone = ConeSpec.create([(1, -1), (-1, -1)], interior_point=(0, 1))
    a = GSet.from_hrep(_h(((-1, -1), 0)), cone)
    b = GSet.from_hrep(_h(((1, -1), 0)), cone)
    z = (0, -1)
    lhs = max(cl.scalarize(a, z), cl.scalarize(b, z))
    return lhs, cl.scalarize(cl.sup_family([a, b]), z)


def _h(*rows):
    from .polyhedral import HRep

    return HRep.of(2, rows)


@dataclass
class LawReport:
    seed: int
    dims: tuple[int, ...]
    counts: dict[str, int] = field(default_factory=dict)
    violations: dict[str, list] = field(default_factory=dict)

    def record(self, name: str, ok: bool, data=None) -> None:
        self.counts[name] = self.counts.get(name, 0) + 1
        self.violations.setdefault(name, [])
        if not ok:
            self.violations[name].append(data)

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())


def run_law_suite(dims: Sequence[int], seed: int, cases: int) -> LawReport:
    """Adjunction, calculus inequality, scalarization and lattice laws on random data."""
    rng = random.Random(seed)
    rep = LawReport(seed, tuple(dims))
    for i in range(cases):
        dim = dims[i % len(dims)]
        cone = random_cone(rng, dim)
        a, b, m, e = (random_gset(rng, cone) for _ in range(4))
        rep.record("adjunction", check_adjunction(a, b, m), (a, b, m))
        t, s = random_scalar(rng), random_scalar(rng)
        rep.record("calc_conlin", check_calc_conlin(a, b, m, e, t, s), (a, b, m, e, t, s))
        fam = [random_gset(rng, cone) for _ in range(rng.randint(0, 3))]
        z = random_dual(rng, cone)
        rep.record("scal_inf", check_scal_inf(fam, z, cone), (fam, z))
        rep.record("scal_sup", check_scal_sup(fam, z, cone), (fam, z))
        rep.record("lattice", check_lattice(a, b, m), (a, b, m))
    return rep
