from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from setvi import conlinear as cl
from setvi.conlinear import ConeError, ConeSpec, GSet
from setvi.extreal import INF, NEG_INF, inf_residual
from setvi.polyhedral import HRep, VRep

from conftest import pareto, vset

C = pareto()
ipt = st.tuples(st.integers(-3, 3), st.integers(-3, 3))
gsets = st.one_of(
    st.sampled_from([GSet.empty(C), GSet.full(C), GSet.cone_set(C)]),
    st.lists(ipt, min_size=1, max_size=3).map(lambda vs: vset(C, vs)),
    st.builds(lambda vs, r: vset(C, vs, [r]), st.lists(ipt, min_size=1, max_size=2), st.sampled_from([(-1, 1), (1, -1), (-1, 0)])),
)
duals = st.tuples(st.integers(0, 4), st.integers(0, 4)).filter(any).map(lambda w: (Fraction(-w[0], sum(w)), Fraction(-w[1], sum(w))))


def test_cone_validation():
    cone = ConeSpec.create([(-2, 0), (0, -1)])
    assert cone.in_interior(cone.interior_point)
    for m in cone.dual_base:
        assert sum(a * b for a, b in zip(m, cone.interior_point)) == -1
    with pytest.raises(ConeError):
        ConeSpec.create([(1, 0), (-1, 0)])
    with pytest.raises(ConeError):
        ConeSpec.create([])
    with pytest.raises(ConeError):
        ConeSpec.create([(-1, 0), (0, -1)], interior_point=(1, 0))


def test_normalize_examples():
    assert vset(C, [(0, 0)]) == GSet.cone_set(C)
    assert cl.normalize(VRep.empty(2), C).is_empty
    seg = vset(C, [(0, 1), (1, 0)])
    assert sorted(seg.vrep.vertices) == [(0, 1), (1, 0)]
    assert seg.contains((Fraction(1, 2), Fraction(1, 2))) and not seg.contains((0, 0))


def test_oplus_and_scale():
    a = vset(C, [(1, 2)])
    assert cl.scale(0, GSet.empty(C)) == GSet.cone_set(C)
    assert cl.scale(0, GSet.full(C)) == GSet.cone_set(C)
    assert cl.oplus(a, GSet.cone_set(C)) == a
    assert cl.oplus(a, GSet.empty(C)).is_empty
    assert cl.oplus(GSet.full(C), GSet.empty(C)).is_empty
    assert cl.scale(2, a) == vset(C, [(2, 4)])


def test_inf_sup():
    a, b = vset(C, [(0, 0)]), vset(C, [(1, 1)])
    assert cl.inf_family([a, b]) == a
    assert cl.inf_family([], C).is_empty
    assert cl.sup_family([], C).is_full
    k = ConeSpec.create([(1, -1), (-1, -1)], interior_point=(0, 1))
    up = GSet.from_hrep(HRep.of(2, [((-1, -1), 0)]), k)
    down = GSet.from_hrep(HRep.of(2, [((1, -1), 0)]), k)
    assert cl.sup_family([up, down]) == GSet.cone_set(k)


def test_residual_examples():
    a, b = GSet.cone_set(C), vset(C, [(1, 1)])
    assert cl.residual(b, a) == b
    assert cl.residual(a, b) == vset(C, [(-1, -1)])
    tri = vset(C, [(-1, 2), (2, -1)])
    assert cl.residual(tri, tri) == cl.recession(tri) == GSet.cone_set(C)
    assert cl.residual(GSet.empty(C), b).is_empty
    assert cl.residual(a, GSet.empty(C)).is_full


def test_recession_and_scalarize():
    assert cl.recession(vset(C, [(1, 1)])) == GSet.cone_set(C)
    assert cl.recession(GSet.empty(C)).is_empty
    assert cl.scalarize(vset(C, [(1, 1)]), (-1, 0)) == 1
    assert cl.scalarize(GSet.empty(C), (-1, 0)) == INF
    k = ConeSpec.create([(1, -1), (-1, -1)], interior_point=(0, 1))
    half = GSet.from_hrep(HRep.of(2, [((-1, -1), 0)]), k)
    assert cl.scalarize(half, (0, -1)) == NEG_INF


def test_leq_lattice_ends():
    a = vset(C, [(1, 1)])
    assert cl.leq(GSet.cone_set(C), a)
    assert cl.leq(a, GSet.empty(C))
    assert cl.leq(GSet.full(C), a)


def test_inclusion_audit_examples():
    c0 = GSet.cone_set(C)
    r = cl.inclusion_audit(c0, c0)
    assert r.not_in_int and r.scalar_cert is not None and r.robust_not_subset
    r = cl.inclusion_audit(vset(C, [(1, 1)]), c0)
    assert not r.not_in_int and not r.robust_not_subset and r.chain_ok


def test_certificate_candidates_include_facets():
    tri = vset(C, [(-1, 2), (2, -1)])
    cands = cl.certificate_candidates(C, tri)
    assert (Fraction(-1, 2), Fraction(-1, 2)) in cands
    assert set(C.dual_base) <= set(cands)


@given(gsets, gsets, gsets)
def test_adjunction(a, b, m):
    assert cl.leq(a, cl.oplus(b, m)) == cl.leq(cl.residual(a, b), m)


@given(gsets, gsets, gsets)
def test_inf_sup_bounds_and_distributivity(a, b, c):
    lo, hi = cl.inf_family([a, b]), cl.sup_family([a, b])
    assert cl.leq(lo, a) and cl.leq(lo, b) and cl.leq(a, hi) and cl.leq(b, hi)
    assert cl.oplus(c, lo) == cl.inf_family([cl.oplus(c, a), cl.oplus(c, b)])


@given(st.lists(gsets, max_size=3), duals)
def test_scalarization_of_inf_and_sup(fam, z):
    assert cl.scalarize(cl.inf_family(fam, C), z) == min((cl.scalarize(a, z) for a in fam), default=INF)
    assert cl.scalarize(cl.sup_family(fam, C), z) >= max((cl.scalarize(a, z) for a in fam), default=NEG_INF)


@given(gsets, gsets, duals)
def test_scalarization_of_difference(a, b, z):
    lhs = cl.scalarize(cl.residual(a, b), z)
    assert lhs >= inf_residual(cl.scalarize(a, z), cl.scalarize(b, z))


@given(gsets, ipt, duals)
def test_difference_by_translated_cone(a, p, z):
    b = vset(C, [p])
    assert cl.scalarize(cl.residual(a, b), z) == inf_residual(cl.scalarize(a, z), cl.scalarize(b, z))


@given(gsets)
def test_recession_dual_sandwich(a):
    if a.is_empty or a.is_full:
        return
    rec = cl.recession(a)
    for m in C.dual_base:
        if cl.scalarize(a, m).is_finite:
            # m is nonpositive on 0+A
            assert cl.scalarize(rec, m) == 0


@given(gsets, gsets)
def test_inclusion_chain(a, b):
    assert cl.inclusion_audit(a, b).chain_ok
