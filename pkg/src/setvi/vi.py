"""Weak minimality and Stampacchia/Minty variational inequalities.

Seven predicates at a candidate ``x0``, each quantified over a finite set
``X`` of test points:

    W-Min      no x and eps > 0 with  f(x0) + eps U0 ⊆ f(x)
    W-l-Min    no x with  f(x0) ⊆ int f(x)
    Sc-W-Min   every x has z* in W* with  phi(x0) <= phi(x) != -inf
    W-SVI      0 ∉ int f'(x0, x - x0)
    Sc-W-SVI   every x has z* with  0 <= phi'(x0, x - x0)
    W-MVI      f'(x, x0 - x) ⊄ int 0+f(x)
    Sc-W-MVI   every x has z* with  phi(x) != -inf and phi'(x, x0 - x) <= 0

Each predicate holds trivially when ``f(x0)`` is the whole space.  Dual
certificates are searched over M* plus the facet normals of the sets
involved, rescaled into W*; for polyhedral sets this finite search is
complete.  Scalar Stampacchia conditions use the lower Dini derivative and
scalar Minty conditions the upper one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import conlinear as cl
from .dini import scalar_derivative, set_derivative
from .extreal import ZERO
from .polyhedral import dot, smul, sub, vec
from .setfun import SetFun
from .tristate import Status

__all__ = [
    "PREDICATES",
    "DomainError",
    "PredicateResult",
    "PredicateReport",
    "is_weak_min",
    "is_weak_l_min",
    "is_sc_weak_min",
    "solves_wsvi",
    "solves_sc_wsvi",
    "solves_wmvi",
    "solves_sc_wmvi",
    "evaluate_all",
    "Implication",
    "AuditReport",
    "implication_audit",
    "segment_closed",
    "check_arrows",
    "IMPLICATIONS",
]

PREDICATES = ("W-Min", "W-l-Min", "Sc-W-Min", "W-SVI", "Sc-W-SVI", "W-MVI", "Sc-W-MVI")


class DomainError(ValueError):
    """The candidate point is not in the domain of the map."""


@dataclass(frozen=True)
class PredicateResult:
    predicate: str
    status: Status
    witness_point: tuple | None = None
    certificate_dual: tuple | None = None
    exact: bool = True
    certificates: tuple = ()

    def as_dict(self) -> dict:
        from .extreal import format_rational

        fmt = lambda v: None if v is None else [format_rational(Fraction(c)) for c in v]  # noqa: E731
        return {
            "predicate": self.predicate,
            "status": str(self.status),
            "witness_point": fmt(self.witness_point),
            "certificate_dual": fmt(self.certificate_dual),
            "exact": self.exact,
        }


@dataclass
class PredicateReport:
    x0: tuple
    results: dict[str, PredicateResult] = field(default_factory=dict)

    def status(self, name: str) -> Status:
        return self.results[name].status

    def holds(self, name: str) -> bool:
        return self.results[name].status is Status.HOLDS


def _base(f: SetFun, x0: Sequence) -> cl.GSet:
    a = f.evaluate(x0)
    if a.is_empty:
        raise DomainError(f"{tuple(x0)} is not in the domain")
    return a


def _points(X: Iterable[Sequence]) -> list[tuple]:
    return [vec(x) for x in X]


# -- fast paths for extensions of single-valued maps ---------------------------
#
# For f = psi^C the sets involved are translates of C, so interior and
# inclusion tests reduce to sign checks against the dual base: z lies in
# int C exactly when m.z < 0 for every m in M*.


def _in_int_cone(f: SetFun, z: Sequence) -> bool:
    return all(dot(m, z) < 0 for m in f.cone.dual_base)


def _ext_value(f: SetFun, x: Sequence):
    return f.psi.value(x) if f.is_extension else None


_OFF = object()


def _ext_slope(f: SetFun, x: Sequence, u: Sequence):
    """``d`` with ``f'(x, u) = {d} + C``, ``_OFF`` when the ray leaves the domain
    at once (derivative Empty), or ``None`` when the general path is needed."""
    if not f.is_extension:
        return None
    g = f.psi.germ(x, u)
    if g is None:
        return _OFF
    _, p, d = g
    return d if p == f.psi.value(x) else None


def _dominates(f: SetFun, x0: Sequence, x: Sequence) -> bool | None:
    """Whether ``psi(x0) - psi(x)`` lies in int C; ``None`` off the fast path."""
    v0 = _ext_value(f, x0)
    if v0 is None:
        return None
    v = f.psi.value(x)
    if v is None:
        return False
    return _in_int_cone(f, sub(v0, v))


def is_weak_l_min(f: SetFun, x0: Sequence, X: Iterable[Sequence]) -> PredicateResult:
    a = _base(f, x0)
    if a.is_full:
        return PredicateResult("W-l-Min", Status.HOLDS)
    for x in _points(X):
        fast = _dominates(f, x0, x)
        if fast if fast is not None else cl.strictly_inside(a, f.evaluate(x)):
            return PredicateResult("W-l-Min", Status.FAILS, witness_point=x)
    return PredicateResult("W-l-Min", Status.HOLDS)


def is_weak_min(f: SetFun, x0: Sequence, X: Iterable[Sequence]) -> PredicateResult:
    a = _base(f, x0)
    if a.is_full:
        return PredicateResult("W-Min", Status.HOLDS)
    for x in _points(X):
        fast = _dominates(f, x0, x)
        if fast if fast is not None else cl.margin_inside(a, f.evaluate(x)) is not None:
            return PredicateResult("W-Min", Status.FAILS, witness_point=x)
    return PredicateResult("W-Min", Status.HOLDS)


def is_sc_weak_min(f: SetFun, x0: Sequence, X: Iterable[Sequence]) -> PredicateResult:
    a = _base(f, x0)
    if a.is_full:
        return PredicateResult("Sc-W-Min", Status.HOLDS)
    certs = []
    for x in _points(X):
        sets = () if f.is_extension else (a, f.evaluate(x))
        found = None
        for z in cl.certificate_candidates(f.cone, *sets):
            pa, pb = f.scalar(z, x0), f.scalar(z, x)
            if pa <= pb and not pb.is_neg_inf:
                found = z
                break
        if found is None:
            return PredicateResult("Sc-W-Min", Status.FAILS, witness_point=x)
        certs.append((x, found))
    return _holds_with("Sc-W-Min", certs, x0=x0)


def _holds_with(name: str, certs: list, exact: bool = True, x0: Sequence | None = None) -> PredicateResult:
    # report a certificate from a point other than x0 when there is one
    rest = [z for x, z in certs if x0 is None or tuple(x) != tuple(x0)]
    first = rest[0] if rest else (certs[0][1] if certs else None)
    return PredicateResult(name, Status.HOLDS, certificate_dual=first, exact=exact, certificates=tuple(certs))


def solves_wsvi(f: SetFun, x0: Sequence, X: Iterable[Sequence]) -> PredicateResult:
    a = _base(f, x0)
    if a.is_full:
        return PredicateResult("W-SVI", Status.HOLDS)
    rec = cl.recession(a)
    exact = True
    for x in _points(X):
        fast = _ext_slope(f, x0, sub(x, x0))
        if fast is _OFF:
            continue
        if fast is not None:
            # 0 in int({d}+C) and C ⊆ int({d}+C) both read -d in int C
            if _in_int_cone(f, smul(-1, fast)):
                return PredicateResult("W-SVI", Status.FAILS, witness_point=x, exact=exact)
            continue
        d = set_derivative(f, x0, sub(x, x0))
        exact &= d.exact
        deriv = d.lower
        zero_inside = _zero_in_interior(deriv)
        star = cl.strictly_inside(rec, deriv)
        if zero_inside != star:
            raise AssertionError(f"(star) reformulation disagrees at direction {x}")
        if zero_inside:
            return PredicateResult("W-SVI", Status.FAILS, witness_point=x, exact=exact)
    return PredicateResult("W-SVI", Status.HOLDS, exact=exact)


def _zero_in_interior(d: cl.GSet) -> bool:
    if d.is_empty:
        return False
    if d.is_full:
        return True
    return all(c > 0 for _, c in d.hrep.constraints)


def solves_sc_wsvi(f: SetFun, x0: Sequence, X: Iterable[Sequence]) -> PredicateResult:
    a = _base(f, x0)
    if a.is_full:
        return PredicateResult("Sc-W-SVI", Status.HOLDS)
    certs = []
    exact = True
    for x in _points(X):
        u = sub(x, x0)
        fast = _ext_slope(f, x0, u)
        if fast is not None:
            extra: tuple = ()
        else:
            extra = (set_derivative(f, x0, u).lower, a)
        found = None
        for z in cl.certificate_candidates(f.cone, *extra):
            if fast is _OFF:
                found = z  # phi' = +inf once the ray leaves the domain
                break
            if fast is not None:
                # phi(x0 + t u) = phi(x0) - t z.d on the germ
                if dot(z, fast) <= 0:
                    found = z
                    break
                continue
            s = scalar_derivative(f, z, x0, u)
            exact &= s.exact
            if s.lower >= ZERO:
                found = z
                break
        if found is None:
            return PredicateResult("Sc-W-SVI", Status.FAILS, witness_point=x, exact=exact)
        certs.append((x, found))
    return _holds_with("Sc-W-SVI", certs, exact, x0)


def solves_wmvi(f: SetFun, x0: Sequence, X: Iterable[Sequence]) -> PredicateResult:
    a = _base(f, x0)
    if a.is_full:
        return PredicateResult("W-MVI", Status.HOLDS)
    exact = True
    for x in _points(X):
        fx = f.evaluate(x)
        if fx.is_empty:
            continue  # f'(x, .) is the whole space and 0+f(x) is empty
        fast = _ext_slope(f, x, sub(x0, x))
        if fast is _OFF:
            continue
        if fast is not None:
            # {d}+C ⊆ int C exactly when d lies in int C
            if _in_int_cone(f, fast):
                return PredicateResult("W-MVI", Status.FAILS, witness_point=x, exact=exact)
            continue
        d = set_derivative(f, x, sub(x0, x))
        exact &= d.exact
        if cl.strictly_inside(d.upper, cl.recession(fx)):
            return PredicateResult("W-MVI", Status.FAILS, witness_point=x, exact=exact)
    return PredicateResult("W-MVI", Status.HOLDS, exact=exact)


def solves_sc_wmvi(f: SetFun, x0: Sequence, X: Iterable[Sequence]) -> PredicateResult:
    a = _base(f, x0)
    if a.is_full:
        return PredicateResult("Sc-W-MVI", Status.HOLDS)
    certs = []
    exact = True
    for x in _points(X):
        fx = f.evaluate(x)
        u = sub(x0, x)
        if fx.is_empty or _ext_slope(f, x, u) is not None:
            extra: tuple = ()
        else:
            d = set_derivative(f, x, u)
            extra = (fx, d.upper, cl.recession(fx))
        found = None
        for z in cl.certificate_candidates(f.cone, *extra):
            if f.scalar(z, x).is_neg_inf:
                continue
            s = scalar_derivative(f, z, x, u)
            exact &= s.exact
            if s.upper <= ZERO:
                found = z
                break
        if found is None:
            return PredicateResult("Sc-W-MVI", Status.FAILS, witness_point=x, exact=exact)
        certs.append((x, found))
    return _holds_with("Sc-W-MVI", certs, exact, x0)


_EVALUATORS = {
    "W-Min": is_weak_min,
    "W-l-Min": is_weak_l_min,
    "Sc-W-Min": is_sc_weak_min,
    "W-SVI": solves_wsvi,
    "Sc-W-SVI": solves_sc_wsvi,
    "W-MVI": solves_wmvi,
    "Sc-W-MVI": solves_sc_wmvi,
}


def evaluate_all(f: SetFun, x0: Sequence, X: Sequence[Sequence], names: Sequence[str] = PREDICATES) -> PredicateReport:
    x0 = vec(x0)
    _base(f, x0)
    rep = PredicateReport(x0)
    pts = _points(X)
    for name in names:
        rep.results[name] = _EVALUATORS[name](f, x0, pts)
    return rep


# -- implication auditor ----------------------------------------------------


@dataclass(frozen=True)
class Implication:
    """``premise => conclusion`` under named hypotheses."""

    label: str
    premise: str
    conclusion: str
    needs_convex: bool = False
    needs_extension: bool = False
    needs_segment_closed: bool = False


IMPLICATIONS = (
    Implication("inclusion chain (a)=>(b)", "W-l-Min", "Sc-W-Min"),
    Implication("inclusion chain (b)=>(c)", "Sc-W-Min", "W-Min"),
    Implication("scalar SVI => SVI", "Sc-W-SVI", "W-SVI"),
    Implication("MVI => scalar MVI", "W-MVI", "Sc-W-MVI"),
    Implication("SVI => W-Min", "W-SVI", "W-Min", needs_convex=True),
    Implication("W-Min => SVI", "W-Min", "W-SVI", needs_convex=True, needs_segment_closed=True),
    Implication("scalar SVI => scalar W-Min", "Sc-W-SVI", "Sc-W-Min", needs_convex=True),
    Implication("scalar W-Min => scalar SVI", "Sc-W-Min", "Sc-W-SVI", needs_convex=True, needs_segment_closed=True),
    Implication("scalar W-Min => scalar MVI", "Sc-W-Min", "Sc-W-MVI", needs_convex=True),
    Implication("scalar MVI => scalar W-Min", "Sc-W-MVI", "Sc-W-Min", needs_convex=True, needs_segment_closed=True),
    Implication("MVI => W-Min", "W-MVI", "W-Min", needs_convex=True, needs_segment_closed=True),
    Implication("W-Min => MVI (extension)", "W-Min", "W-MVI", needs_convex=True, needs_extension=True),
    Implication("W-Min => W-l-Min (extension)", "W-Min", "W-l-Min", needs_extension=True),
    Implication("SVI => scalar SVI (extension)", "W-SVI", "Sc-W-SVI", needs_convex=True, needs_extension=True),
    Implication("scalar MVI => MVI (extension)", "Sc-W-MVI", "W-MVI", needs_convex=True, needs_extension=True),
)


def segment_closed(f: SetFun, x0: Sequence, X: Sequence[Sequence]) -> bool:
    """Finite stand-in for the segments the converse arrows walk along.

    The proofs of W-Min => SVI and of the Minty converses use points
    ``x0 + t (x - x0)`` for small ``t``, which a finite X need not contain.
    This holds when ``f`` extends a single-valued map and, on every ray from
    ``x0`` through X, the nearest point of X is reached before the map stops
    being affine.  Those nearest points then witness any strict descent.
    """
    if not f.is_extension:
        return False
    x0 = vec(x0)
    nearest: dict[tuple, tuple[Fraction, tuple]] = {}
    for x in _points(X):
        u = sub(x, x0)
        if not any(u):
            continue
        scale_ = max(abs(c) for c in u)
        key = tuple(c / scale_ for c in u)
        if key not in nearest or scale_ < nearest[key][0]:
            nearest[key] = (scale_, x)
    for _, x in nearest.values():
        g = f.psi.germ(x0, sub(x, x0))
        if g is None or g[0] < 1 or g[1] != f.psi.value(x0):
            return False
    return True


@dataclass
class AuditReport:
    candidates: list[tuple]
    matrix: dict[tuple, dict[str, Status]] = field(default_factory=dict)
    checked: dict[str, int] = field(default_factory=dict)
    not_asserted: dict[str, int] = field(default_factory=dict)
    violations: list[tuple[tuple, str]] = field(default_factory=list)
    strictness: dict[str, tuple] = field(default_factory=dict)
    oracle_mismatch: list[tuple] = field(default_factory=list)
    segment_closed: dict[tuple, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.oracle_mismatch


def implication_audit(
    f: SetFun,
    X: Sequence[Sequence],
    candidates: Sequence[Sequence] | None = None,
    oracle_efficient: set[tuple] | None = None,
) -> AuditReport:
    """Evaluate all predicates at every candidate in ``dom f`` and check the arrows.

    An arrow is checked at ``x0`` only when its hypotheses are established
    there (declared convexity, extension backend, :func:`segment_closed`);
    otherwise it is counted as not asserted.  ``oracle_efficient`` is
    compared with the minimality predicates on extension backends.
    """
    pts = _points(X)
    cands = _points(candidates if candidates is not None else X)
    rep = AuditReport([c for c in cands if f.in_domain(c)])
    for x0 in rep.candidates:
        pr = evaluate_all(f, x0, pts)
        row = {name: pr.status(name) for name in PREDICATES}
        rep.matrix[x0] = row
        seg = segment_closed(f, x0, pts)
        rep.segment_closed[x0] = seg
        checked, skipped, violated = check_arrows(f, row, seg)
        for label in checked:
            rep.checked[label] = rep.checked.get(label, 0) + 1
        for label in skipped:
            rep.not_asserted[label] = rep.not_asserted.get(label, 0) + 1
        rep.violations.extend((x0, label) for label in violated)
        for imp in IMPLICATIONS:
            if imp.label in checked and imp.label not in rep.strictness:
                if row[imp.conclusion] is Status.HOLDS and row[imp.premise] is Status.FAILS:
                    rep.strictness[imp.label] = x0
        if oracle_efficient is not None and f.is_extension:
            eff = x0 in oracle_efficient
            for name in ("W-Min", "W-l-Min", "Sc-W-Min"):
                if (row[name] is Status.HOLDS) != eff:
                    rep.oracle_mismatch.append((x0, name))
    return rep


def check_arrows(f: SetFun, row: dict[str, Status], seg: bool) -> tuple[list[str], list[str], list[str]]:
    """Split the arrows at one point into checked, not asserted and violated."""
    checked, skipped, violated = [], [], []
    for imp in IMPLICATIONS:
        active = (
            (f.declared_convex or not imp.needs_convex)
            and (f.is_extension or not imp.needs_extension)
            and (seg or not imp.needs_segment_closed)
        )
        p, q = row[imp.premise], row[imp.conclusion]
        if not active or Status.UNKNOWN in (p, q):
            skipped.append(imp.label)
            continue
        checked.append(imp.label)
        if p is Status.HOLDS and q is Status.FAILS:
            violated.append(imp.label)
    return checked, skipped, violated
