from __future__ import annotations

from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from setvi import polyhedral as poly
from setvi.extreal import INF, NEG_INF, inf_add
from setvi.polyhedral import HRep, VRep

ipt = st.tuples(st.integers(-3, 3), st.integers(-3, 3))
vreps = st.builds(
    lambda vs, rs: VRep.of(2, vs, [r for r in rs if any(r)]),
    st.lists(ipt, min_size=1, max_size=4),
    st.lists(st.tuples(st.integers(-1, 1), st.integers(-1, 1)), max_size=2),
)
QUADRANT = VRep.of(2, [(0, 0)], [(1, 0), (0, 1)])


def same(a: VRep, b: VRep) -> bool:
    return poly.same_set(a, b)


def test_h_to_v_quadrant():
    v = poly.h_to_v(HRep.of(2, [((1, 0), 0), ((0, -1), 0)]))
    assert same(v, VRep.of(2, [(0, 0)], [(-1, 0), (0, 1)]))


def test_v_to_h_segment():
    h = poly.v_to_h(VRep.of(2, [(0, 0), (1, 0)]))
    assert poly.contains_point(h, (Fraction(1, 2), 0))
    assert not poly.contains_point(h, (2, 0))
    assert not poly.contains_point(h, (Fraction(1, 2), Fraction(1, 100)))


def test_minkowski_examples():
    s = poly.minkowski_sum(QUADRANT, VRep.of(2, [(1, 1)], [(1, 0), (0, 1)]))
    assert same(s, VRep.of(2, [(1, 1)], [(1, 0), (0, 1)]))
    assert poly.minkowski_sum(VRep.empty(2), QUADRANT).is_empty
    sq = poly.minkowski_sum(VRep.of(2, [(0, 0), (1, 0)]), VRep.of(2, [(0, 0), (0, 1)]))
    assert same(sq, VRep.of(2, [(0, 0), (1, 0), (0, 1), (1, 1)]))


def test_intersect_examples():
    v = HRep.of(2, [((-1, -1), 0)])  # y >= -x
    w = HRep.of(2, [((1, -1), 0)])  # y >= x
    both = poly.intersect(v, w)
    assert len(both.constraints) == 2
    assert same(poly.h_to_v(both), VRep.of(2, [(0, 0)], [(1, 1), (-1, 1)]))
    assert poly.intersect(v, HRep.full(2)) == v
    assert poly.h_to_v(poly.intersect(HRep.of(2, [((1, 0), -1)]), HRep.of(2, [((-1, 0), -1)]))).is_empty


def test_support_examples():
    cone = VRep.of(2, [(0, 0)], [(1, 1), (-1, 1)])
    assert poly.support((0, -1), cone) == 0
    assert poly.support((1, 0), VRep.empty(2)) == NEG_INF
    assert poly.support((1, 0), QUADRANT) == INF


def test_strict_subset_examples():
    q = poly.v_to_h(QUADRANT)
    assert poly.strict_subset(VRep.of(2, [(1, 1)], [(1, 0), (0, 1)]), q)
    assert not poly.strict_subset(QUADRANT, q)


@given(vreps)
def test_round_trip(v):
    h = poly.v_to_h(v)
    assert same(poly.h_to_v(h), v)
    assert poly.subset(v, h)


@given(vreps)
def test_subset_reflexive(v):
    h = poly.v_to_h(v)
    assert poly.subset(v, h)
    # every polyhedron here has a vertex, which sits on its own boundary
    assert not poly.strict_subset(v, h)


@given(vreps, vreps, st.tuples(st.integers(-2, 2), st.integers(-2, 2)))
def test_support_of_sum(a, b, z):
    lhs = -poly.support(z, poly.minkowski_sum(a, b))
    assert lhs == inf_add(-poly.support(z, a), -poly.support(z, b))


@given(vreps, vreps)
def test_mutual_subset_is_equality(a, b):
    ha, hb = poly.v_to_h(a), poly.v_to_h(b)
    assert (poly.subset(a, hb) and poly.subset(b, ha)) == (ha == hb)
