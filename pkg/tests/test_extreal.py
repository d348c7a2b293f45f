from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from setvi.extreal import INF, NEG_INF, ExtReal, ext, format_rational, inf_add, inf_residual, parse_rational, scale

GRID = [NEG_INF, ext(-2), ext(0), ext(Fraction(3, 2)), INF]

ext_values = st.one_of(
    st.just(INF),
    st.just(NEG_INF),
    st.fractions(min_value=-10, max_value=10, max_denominator=8).map(lambda q: ExtReal(0, q)),
)


def test_inf_add_examples():
    assert inf_add(2, 3) == 5
    assert inf_add(INF, NEG_INF) == INF
    assert inf_add(NEG_INF, 7) == NEG_INF


def test_inf_residual_examples():
    assert inf_residual(3, 1) == 2
    assert inf_residual(INF, INF) == NEG_INF
    assert inf_residual(INF, 5) == INF
    assert inf_residual(NEG_INF, NEG_INF) == NEG_INF


def test_scale_examples():
    assert scale(Fraction(1, 2), 4) == 2
    assert scale(3, INF) == INF
    assert scale(2, NEG_INF) == NEG_INF
    with pytest.raises(ValueError):
        scale(0, 1)


def test_total_order():
    assert NEG_INF < ext(-10**9) < ext(10**9) < INF
    assert sorted(reversed(GRID)) == GRID


def test_parse_and_format():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert format_rational(Fraction(-1, 2)) == "-1/2"
    assert format_rational(Fraction(4)) == "4"
    assert ExtReal.parse("-inf") == NEG_INF and str(INF) == "+inf"
    for bad in ("1.5", "1/0", "abc", 1.5, True):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_tables_exhaustive():
    # rows r, columns s over the sign classes -inf / finite / +inf
    for r, s in product(GRID, GRID):
        a = inf_add(r, s)
        if INF in (r, s):
            assert a == INF
        elif NEG_INF in (r, s):
            assert a == NEG_INF
        else:
            assert a == ExtReal(0, r.value + s.value)
        d = inf_residual(r, s)
        if s == INF or r == NEG_INF:
            assert d == NEG_INF
        elif s == NEG_INF or r == INF:
            assert d == INF
        else:
            assert d == ExtReal(0, r.value - s.value)


def test_adjunction_exhaustive():
    for r, s, t in product(GRID, repeat=3):
        assert (r <= inf_add(s, t)) == (inf_residual(r, s) <= t)


@given(ext_values, ext_values, ext_values)
def test_adjunction_property(r, s, t):
    assert (r <= inf_add(s, t)) == (inf_residual(r, s) <= t)


@given(ext_values, ext_values, ext_values)
def test_monotone(r, r2, s):
    lo, hi = min(r, r2), max(r, r2)
    assert inf_add(lo, s) <= inf_add(hi, s)
    assert inf_residual(lo, s) <= inf_residual(hi, s)


@given(ext_values)
def test_plus_inf_absorbs(r):
    assert inf_add(r, INF) == INF == inf_add(INF, r)
