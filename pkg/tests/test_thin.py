from __future__ import annotations

from fractions import Fraction

import sympy as sp

from setvi import polyhedral as poly

from setvi.extreal import ExtReal
from setvi.thin import (
    Interval,
    circle_quotient,
    circle_report,
    circle_value,
    inclusion_truncation,
    interval_residual,
    parabola_scalar,
    tangent_margin,
    tangent_scalar,
    tangent_set,
)


def test_interval_residual():
    r = interval_residual(Interval(sp.Integer(-2), sp.Integer(3)), Interval(sp.Integer(-1), sp.Integer(1)))
    assert (r.lo, r.hi) == (-1, 2)
    assert interval_residual(Interval(sp.Integer(0), sp.Integer(1)), Interval(sp.Integer(0), sp.Integer(2))).is_empty
    assert interval_residual(Interval.empty(), Interval(sp.Integer(0), sp.Integer(0))).is_empty


def test_circle_values():
    v = circle_value(Fraction(3, 5))
    assert (v.lo, v.hi) == (Fraction(-4, 5), Fraction(4, 5))
    assert circle_value(2).is_empty
    # any smaller interval cannot contain a translate of [-1, 1]
    assert circle_quotient(0, 1, Fraction(1, 7)).is_empty
    assert circle_quotient(0, -1, Fraction(1, 3)).is_empty


def test_circle_gap():
    rep = circle_report()
    assert rep.quotients_empty and rep.set_derivative_empty
    assert all(d.exact and d.value == 0 for d in rep.scalar.values())
    assert rep.assembled == (0, 0)
    assert rep.gap


def test_tangent_truncation():
    assert [tangent_margin(n) for n in (1, 2, 3)] == [Fraction(1, 2), Fraction(1, 8), Fraction(1, 18)]
    tr = inclusion_truncation(6)
    assert tr.margins == tuple(Fraction(1, 2 * n * n) for n in range(1, 7))
    assert tr.certificate_free
    # at s = 2n the gap is 1/n for every N >= n; at s = 0 it is 2
    for n in range(1, 7):
        for big in range(n, 7):
            assert tr.scalar_gaps[(Fraction(2 * n), big)] == Fraction(1, n)
        assert tr.scalar_gaps[(Fraction(0), n)] == 2
    # beyond the last slope the truncation is unbounded below in that direction
    assert tangent_scalar(13, 6).is_neg_inf
    assert parabola_scalar(4) == ExtReal(0, Fraction(-4))


def test_inclusions_axis_duals():
    # (+-1, 0) only sees unbounded sets; (0, -1) gives the finite gap 2
    b = poly.h_to_v(tangent_set(4))
    assert (-poly.support((1, 0), b)).is_neg_inf and (-poly.support((-1, 0), b)).is_neg_inf
    assert parabola_scalar(0) == 0
    assert tangent_scalar(0, 4) == ExtReal(0, Fraction(-2))
