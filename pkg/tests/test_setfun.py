from __future__ import annotations

from fractions import Fraction

from setvi import conlinear as cl
from setvi.extreal import INF
from setvi.instance import load_instance
from setvi.setfun import ExprProfile, PLProfile, SampledProfile, check_convexity_sampled, check_lsc_at, restrict, scalarization_family
from setvi.tristate import Status

from conftest import INSTANCES, identity_map, pt, triangle, vset


def test_extension_values():
    f, _ = identity_map()
    assert f.evaluate((1, 2)) == vset(f.cone, [(1, 2)])
    assert f.evaluate((3, 0)).is_empty
    assert f.scalar((-1, 0), (1, 2)) == 1
    assert f.scalar((-1, 0), (3, 0)) == INF


def test_extension_scalar_is_linear_on_domain():
    f, grid = identity_map()
    phi = scalarization_family(f)
    for x in grid:
        for z in f.cone.dual_base:
            assert phi(z, x) == -sum(a * b for a, b in zip(z, x))


def test_restrict():
    f = triangle()
    g = restrict(f, (0,), (1,))
    assert g.evaluate((0,)) == f.evaluate((0,))
    assert g.evaluate((1,)) == f.evaluate((1,))
    assert g.evaluate((Fraction(3, 2),)).is_empty
    for t in (Fraction(1, 3), Fraction(3, 4)):
        assert g.evaluate((t,)) == f.evaluate((t,))
        assert g.scalar((-1, 0), (t,)) == f.scalar((-1, 0), (t,))


def test_triangle_values():
    f = triangle()
    t = Fraction(1, 3)
    assert f.evaluate((t,)) == vset(f.cone, [(-t, 2 * t), (2 * t, -t)])
    assert f.evaluate((0,)) == cl.GSet.cone_set(f.cone)
    # the facet normal z1 + z2 >= t scalarizes to t/2
    assert f.scalar((Fraction(-1, 2), Fraction(-1, 2)), (t,)) == t / 2
    assert cl.recession(f.evaluate((t,))) == cl.GSet.cone_set(f.cone)


def test_convexity_audit():
    f = triangle()
    triples = [((0,), (1,), Fraction(1, 2)), ((Fraction(1, 4),), (1,), Fraction(1, 3))]
    assert check_convexity_sampled(f, triples).ok
    g, _ = identity_map()
    assert check_convexity_sampled(g, [(pt(-2, 1), pt(2, 0), Fraction(1, 2))]).ok
    osc = load_instance(INSTANCES / "oscillation_r3.json").function
    # psi(1/3) = (1/3, 0, 0), psi(1/6) = (1/6, 0, 0) but psi(1/4) = (-1/4, 0, 0)
    rep = check_convexity_sampled(osc, [((Fraction(1, 6),), (Fraction(1, 3),), Fraction(1, 2))])
    assert rep.set_violations and rep.scalar_violations


def test_lsc():
    assert check_lsc_at(PLProfile.of([(0, 1, True, True, Fraction(1, 2), 0)]), 0) is Status.HOLDS
    jump = PLProfile.of([(0, 0, True, True, 0, 1), (0, 1, False, True, 0, 0)])
    assert check_lsc_at(jump, 0) is Status.FAILS
    assert check_lsc_at(SampledProfile.of([(Fraction(1, n), (-1) ** n) for n in range(1, 9)] + [(0, 0)]), 0) is Status.UNKNOWN
    assert check_lsc_at(ExprProfile.parse("-sqrt(1 - x**2)", -1, 1), 0) is Status.HOLDS


def test_pl_profile_germ():
    p = PLProfile.of([(-1, 0, True, True, -1, 0), (0, 1, True, True, 1, 0)])
    assert p(Fraction(-1, 2)) == Fraction(1, 2)
    assert p.right_germ(0, 1) == (0, 1)
    assert p.right_germ(0, -1) == (0, 1)
    assert p(2) == INF
