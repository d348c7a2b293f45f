from __future__ import annotations

from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from setvi import conlinear as cl
from setvi.conlinear import GSet
from setvi.dini import (
    assemble_from_scalar,
    harmonic_steps,
    quotient,
    regularity_audit,
    scalar_derivative,
    scalar_dini,
    set_derivative,
    set_dini_convex,
    set_dini_sampled,
)
from setvi.extreal import INF, ExtReal
from setvi.polyhedral import HRep
from setvi.setfun import ExprProfile, MaxAffineMap, PLProfile, extend
from setvi.tristate import Status

from conftest import identity_map, pareto, pt, triangle, vset

C = pareto()


def cvx_map():
    dom = HRep.of(2, [((1, 0), 3), ((-1, 0), 3), ((0, 1), 3), ((0, -1), 3)])
    comps = [[((1, 0), 0), ((-1, 1), 1)], [((0, -1), 0), ((2, 1), -2)]]
    return extend(MaxAffineMap.of(dom, comps), C, declared_convex=True)


def test_quotient_of_extension():
    f, _ = identity_map()
    assert quotient(f, pt(0, 0), pt(1, -1), Fraction(1, 2)) == vset(C, [(1, -1)])
    assert quotient(f, pt(5, 5), pt(1, 0), 1).is_full
    assert quotient(f, pt(2, 2), pt(1, 0), 1).is_empty


def test_scalar_dini_examples():
    absval = PLProfile.of([(-5, 0, True, True, -1, 0), (0, 5, True, True, 1, 0)])
    assert scalar_dini(absval, 0, 1).value == 1
    for s in (-2, -1, Fraction(1, 2), 3):
        prof = ExprProfile.parse(f"-{abs(Fraction(s))}*sqrt(1 - x**2)", -1, 1)
        r = scalar_dini(prof, 0, 1)
        assert r.exact and r.value == 0


def test_triangle_derivative():
    f = triangle()
    d = set_dini_convex(f, pt(1), pt(-1))
    assert d.exact and d.upper == d.lower == vset(C, [(1, 1)])
    assert set_derivative(f, pt(1), pt(-1)).upper == vset(C, [(1, 1)])


def test_derivative_in_zero_direction_is_recession():
    f = triangle()
    x = pt(Fraction(1, 2))
    assert set_derivative(f, x, pt(0)).lower == cl.recession(f.evaluate(x))


def test_identity_derivative():
    f, _ = identity_map()
    for u in (pt(1, 0), pt(-1, 2), pt(0, -1)):
        d = set_derivative(f, pt(0, 0), u)
        assert d.upper == d.lower == vset(C, [u])


def test_oscillation_upper_derivative(instance):
    inst = instance("oscillation_r3")
    f = inst.function
    d = set_dini_sampled(f, pt(0), pt(1), harmonic_steps(64))
    target = cl.oplus(vset(f.cone, [(0, 1, 1), (0, 1, -1)]), GSet.cone_set(f.cone))
    assert d.upper == target
    assert not d.exact
    rep = regularity_audit(f, pt(0), pt(1), inst.steps, inst.extra_duals)
    z = (0, -1, 0)
    assert rep.upper_scalar[z] == 0 and rep.upper_support[z] == 1
    assert rep.sr[z] is Status.FAILS


def test_jump_derivative(instance):
    inst = instance("jump")
    f = inst.function
    d = set_derivative(f, pt(0), pt(1))
    assert d.upper.is_empty and d.lower.is_empty
    assert scalar_derivative(f, (0, -1), pt(0), pt(1)).value == 0
    rep = regularity_audit(f, pt(0), pt(1), extra_duals=inst.extra_duals)
    assert rep.upper_support[(0, -1)] == INF


def test_constant_map_derivative():
    dom = HRep.of(1, [((1,), 1), ((-1,), 1)])
    f = extend(MaxAffineMap.of(dom, [[((0,), 2)], [((0,), -1)]]), C)
    d = set_derivative(f, pt(0), pt(1))
    assert d.upper == d.lower == cl.recession(f.evaluate(pt(0)))


def test_assemble_pareto():
    got = assemble_from_scalar({(-1, 0): ExtReal(0, Fraction(3)), (0, -1): ExtReal(0, Fraction(-1, 2))}, C)
    assert got == vset(C, [(3, Fraction(-1, 2))])


def test_regularity_convex_extension():
    f = cvx_map()
    for x in (pt(0, 0), pt(1, -1), pt(2, 2)):
        for u in (pt(1, 0), pt(-1, 1), pt(0, -1)):
            rep = regularity_audit(f, x, u, extra_duals=[(Fraction(-1, 3), Fraction(-2, 3))])
            assert rep.sr_all is Status.HOLDS and rep.wr is Status.HOLDS


dirs = st.tuples(st.integers(-2, 2), st.integers(-2, 2)).filter(any)
points = st.tuples(st.integers(-2, 2), st.integers(-2, 2))


@given(points, dirs, st.integers(1, 4))
def test_positive_homogeneity(x, u, s):
    f = cvx_map()
    d1 = set_derivative(f, x, u)
    d2 = set_derivative(f, x, tuple(s * c for c in u))
    assert d2.upper == cl.scale(s, d1.upper) and d2.lower == cl.scale(s, d1.lower)


@given(points, dirs, dirs)
def test_sublinear(x, u, v):
    f = cvx_map()
    w = tuple(a + b for a, b in zip(u, v))
    lhs = set_derivative(f, x, w).lower
    rhs = cl.oplus(set_derivative(f, x, u).lower, set_derivative(f, x, v).lower)
    assert cl.leq(lhs, rhs)


@given(points, dirs)
def test_recession_propagates(x, u):
    f = cvx_map()
    d = set_derivative(f, x, u)
    for side in (d.upper, d.lower):
        if not side.is_empty:
            assert cl.leq(cl.recession(side), cl.recession(f.evaluate(x)))


@given(points, dirs)
def test_quotient_decreasing(x, u):
    f = cvx_map()
    qs = [quotient(f, x, u, Fraction(1, k)) for k in (1, 2, 4, 8)]
    for big, small in zip(qs, qs[1:]):
        assert cl.leq(small, big)
