"""Exact rational polyhedra in small dimension.

A polyhedron has two descriptions:

* :class:`HRep` -- finitely many halfspaces ``<normal, z> <= offset``;
* :class:`VRep` -- ``conv(vertices) + cone(rays) + span(lines)``.

Conversion in both directions goes through the double description method
applied to a homogenized cone, with every intermediate generator kept as a
primitive integer vector.  Outputs are canonical: irredundant, sorted, with
constraints scaled to primitive integer rows and the lineality space in
reduced echelon form.  Equal sets therefore get equal representations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

from .extreal import INF, NEG_INF, ExtReal

__all__ = [
    "Vec",
    "vec",
    "HRep",
    "VRep",
    "h_to_v",
    "v_to_h",
    "minkowski_sum",
    "intersect",
    "support",
    "contains_point",
    "subset",
    "strict_subset",
    "same_set",
    "dot",
    "add",
    "sub",
    "smul",
    "cross_polytope",
]

Vec = tuple  # tuple[Fraction, ...]


def vec(xs: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in xs)


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def add(a: Sequence, b: Sequence) -> tuple[Fraction, ...]:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> tuple[Fraction, ...]:
    return tuple(x - y for x, y in zip(a, b))


def smul(t, a: Sequence) -> tuple[Fraction, ...]:
    return tuple(t * x for x in a)


# -- integer vector helpers -------------------------------------------------


def _primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = reduce(gcd, (abs(x) for x in v), 0)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def _to_int(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Positive multiple of ``v`` that is a primitive integer vector."""
    den = reduce(lcm, (Fraction(x).denominator for x in v), 1)
    return _primitive([int(Fraction(x) * den) for x in v])


def _idot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _rank(rows: list[Sequence[int]]) -> int:
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][c]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / p
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def _rref(rows: list[Sequence[Fraction]]) -> list[tuple[Fraction, ...]]:
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][c]
        m[rank] = [x / p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
    return [tuple(r) for r in m[:rank]]


def solve(a: list[Sequence[Fraction]], b: Sequence[Fraction]) -> tuple[Fraction, ...] | None:
    """Solve a square system exactly; ``None`` if singular."""
    n = len(a)
    m = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(a, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return tuple(m[i][n] for i in range(n))


def _project_out(v: Sequence[Fraction], basis: list[Sequence[Fraction]]) -> tuple[Fraction, ...]:
    """Orthogonal projection of ``v`` onto the complement of span(basis)."""
    if not basis:
        return tuple(v)
    k = len(basis)
    gram = [[dot(basis[i], basis[j]) for j in range(k)] for i in range(k)]
    rhs = [dot(basis[i], v) for i in range(k)]
    coef = solve(gram, rhs)
    assert coef is not None, "lineality basis must be independent"
    out = list(v)
    for c, b in zip(coef, basis):
        out = [x - c * y for x, y in zip(out, b)]
    return tuple(out)


# -- double description ------------------------------------------------------


def _cone_generators(rows: list[tuple[int, ...]], d: int) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Generators of ``{y in R^d | <row, y> <= 0 for all rows}``.

    Returns ``(lines, rays)`` as integer vectors; rays are extreme rays of
    the cone modulo its lineality space.
    """
    lines: list[tuple[int, ...]] = [tuple(1 if i == j else 0 for i in range(d)) for j in range(d)]
    rays: list[tuple[int, ...]] = []
    done: list[tuple[int, ...]] = []
    for a in rows:
        if not any(a):
            continue
        idx = next((i for i, l in enumerate(lines) if _idot(a, l) != 0), None)
        if idx is not None:
            l = lines.pop(idx)
            al = _idot(a, l)
            sgn = 1 if al > 0 else -1

            def reduce_(v: tuple[int, ...]) -> tuple[int, ...]:
                av = _idot(a, v)
                if av == 0:
                    return v
                return _primitive([sgn * (al * x - av * y) for x, y in zip(v, l)])

            lines = [reduce_(m) for m in lines]
            rays = [reduce_(r) for r in rays]
            rays.append(_primitive([-sgn * y for y in l]))
            done.append(a)
            continue
        vals = [_idot(a, r) for r in rays]
        pos = [(r, v) for r, v in zip(rays, vals) if v > 0]
        neg = [(r, v) for r, v in zip(rays, vals) if v < 0]
        new = [r for r, v in zip(rays, vals) if v <= 0]
        if pos and neg:
            target = d - len(lines) - 2
            zsets = {r: frozenset(i for i, row in enumerate(done) if _idot(row, r) == 0) for r in rays}
            for p, vp in pos:
                for n, vn in neg:
                    common = zsets[p] & zsets[n]
                    if len(common) < target:
                        continue
                    # adjacent iff no third extreme ray is active on the common set
                    if any(r != p and r != n and common <= zsets[r] for r in rays):
                        continue
                    new.append(_primitive([vp * x - vn * y for x, y in zip(n, p)]))
        rays = list(dict.fromkeys(new))
        done.append(a)
    return lines, rays


# -- representations ---------------------------------------------------------


def _canon_constraint(a: Sequence[Fraction], c: Fraction) -> tuple[tuple[Fraction, ...], Fraction]:
    iv = _to_int(list(a) + [c])
    return tuple(Fraction(x) for x in iv[:-1]), Fraction(iv[-1])


@dataclass(frozen=True)
class HRep:
    """``{z | <normal_i, z> <= offset_i}``; no constraints means the full space."""

    dim: int
    constraints: tuple[tuple[tuple[Fraction, ...], Fraction], ...] = ()
    is_empty: bool = False

    @classmethod
    def of(cls, dim: int, rows: Iterable[tuple[Iterable, object]]) -> HRep:
        cons = []
        for a, c in rows:
            a = vec(a)
            if len(a) != dim:
                raise ValueError("constraint dimension mismatch")
            cons.append((a, Fraction(c)))
        return cls(dim, tuple(cons))

    @classmethod
    def empty(cls, dim: int) -> HRep:
        return cls(dim, (), True)

    @classmethod
    def full(cls, dim: int) -> HRep:
        return cls(dim, ())

    @property
    def is_full(self) -> bool:
        return not self.is_empty and not self.constraints


@dataclass(frozen=True)
class VRep:
    """``conv(vertices) + cone(rays) + span(lines)``; empty iff no vertices."""

    dim: int
    vertices: tuple[tuple[Fraction, ...], ...] = ()
    rays: tuple[tuple[Fraction, ...], ...] = ()
    lines: tuple[tuple[Fraction, ...], ...] = field(default=())

    @classmethod
    def of(cls, dim: int, vertices: Iterable = (), rays: Iterable = (), lines: Iterable = ()) -> VRep:
        vs = tuple(vec(v) for v in vertices)
        rs = tuple(vec(r) for r in rays)
        ls = tuple(vec(l) for l in lines)
        for v in vs + rs + ls:
            if len(v) != dim:
                raise ValueError("generator dimension mismatch")
        return cls(dim, vs, rs, ls)

    @classmethod
    def empty(cls, dim: int) -> VRep:
        return cls(dim)

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def all_rays(self) -> tuple[tuple[Fraction, ...], ...]:
        """Recession directions with each line split into two opposite rays."""
        return self.rays + self.lines + tuple(smul(-1, l) for l in self.lines)


def h_to_v(h: HRep) -> VRep:
    n = h.dim
    if h.is_empty:
        return VRep.empty(n)
    rows = [_to_int(list(a) + [-c]) for a, c in h.constraints]
    rows.append(tuple([0] * n + [-1]))
    lines, rays = _cone_generators(rows, n + 1)
    points = [r for r in rays if r[n] > 0]
    if not points:
        return VRep.empty(n)
    lin = _rref([vec(l[:n]) for l in lines])
    verts = set()
    for r in points:
        v = tuple(Fraction(x, r[n]) for x in r[:n])
        verts.add(_project_out(v, lin))
    dirs = set()
    for r in rays:
        if r[n] == 0:
            p = _project_out(vec(r[:n]), lin)
            if any(p):
                dirs.add(tuple(Fraction(x) for x in _to_int(p)))
    lin_canon = tuple(tuple(Fraction(x) for x in _to_int(l)) for l in lin)
    return VRep(n, tuple(sorted(verts)), tuple(sorted(dirs)), lin_canon)


def v_to_h(v: VRep) -> HRep:
    n = v.dim
    if v.is_empty:
        return HRep.empty(n)
    # cone of valid inequalities (a, c): <a, vertex> - c <= 0, <a, ray> <= 0
    rows = [_to_int(list(p) + [-1]) for p in v.vertices]
    rows += [_to_int(list(r) + [0]) for r in v.rays if any(r)]
    for l in v.lines:
        li = _to_int(list(l) + [0])
        rows += [li, tuple(-x for x in li)]
    lines, rays = _cone_generators(rows, n + 1)
    cons = set()
    lin = _rref([vec(l) for l in lines])
    for l in lin:
        a, c = l[:n], l[n]
        if any(a):
            cons.add(_canon_constraint(a, c))
            cons.add(_canon_constraint(smul(-1, a), -c))
    for r in rays:
        p = _project_out(vec(r), lin) if lin else vec(r)
        a, c = p[:n], p[n]
        if any(a):
            cons.add(_canon_constraint(a, c))
    return HRep(n, tuple(sorted(cons)))


def _clean_v(v: VRep) -> VRep:
    return h_to_v(v_to_h(v))


def minkowski_sum(a: VRep, b: VRep) -> VRep:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.is_empty or b.is_empty:
        return VRep.empty(a.dim)
    verts = {add(p, q) for p in a.vertices for q in b.vertices}
    return _clean_v(VRep(a.dim, tuple(sorted(verts)), a.rays + b.rays, a.lines + b.lines))


def intersect(a: HRep, b: HRep) -> HRep:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.is_empty or b.is_empty:
        return HRep.empty(a.dim)
    joined = HRep(a.dim, a.constraints + b.constraints)
    return v_to_h(h_to_v(joined))


def support(zstar: Sequence, p: VRep) -> ExtReal:
    """``sup{<zstar, z> | z in p}``."""
    if p.is_empty:
        return NEG_INF
    for r in p.rays:
        if dot(zstar, r) > 0:
            return INF
    for l in p.lines:
        if dot(zstar, l) != 0:
            return INF
    return ExtReal(0, max(dot(zstar, x) for x in p.vertices))


def contains_point(p: HRep, z: Sequence) -> bool:
    if p.is_empty:
        return False
    return all(dot(a, z) <= c for a, c in p.constraints)


def subset(a: VRep, b: HRep) -> bool:
    if a.is_empty:
        return True
    if b.is_empty:
        return False
    for n, c in b.constraints:
        if any(dot(n, x) > c for x in a.vertices):
            return False
        if any(dot(n, r) > 0 for r in a.rays):
            return False
        if any(dot(n, l) != 0 for l in a.lines):
            return False
    return True


def strict_subset(a: VRep, b: HRep) -> bool:
    """``a`` is contained in the interior of ``b``."""
    if b.is_empty:
        return a.is_empty
    if a.is_empty:
        return True
    for n, c in b.constraints:
        if any(dot(n, x) >= c for x in a.vertices):
            return False
        if any(dot(n, r) > 0 for r in a.rays):
            return False
        if any(dot(n, l) != 0 for l in a.lines):
            return False
    return True


def same_set(a: VRep, b: VRep) -> bool:
    return subset(a, v_to_h(b)) and subset(b, v_to_h(a))


def cross_polytope(dim: int) -> VRep:
    verts = []
    for i in range(dim):
        for s in (1, -1):
            verts.append(tuple(Fraction(s) if j == i else Fraction(0) for j in range(dim)))
    return VRep.of(dim, verts)
