"""Extended reals with inf-addition and inf-residuation.

The extended real line, ordered as usual and equipped with

    r +. s = inf{a + b | r <= a, s <= b}
    r -. s = inf{t in R | r <= s +. t}

is a model of the conlinear space of upper closed half-lines of R:
``+inf`` stands for the empty set, ``-inf`` for the whole line and a finite
``r`` for ``[r, +inf)``.

Operation tables (rows: r, columns: s, ``f`` a finite value)::

    r +. s  | -inf   g      +inf          r -. s  | -inf   g      +inf
    --------+--------------------        ---------+--------------------
    -inf    | -inf   -inf   +inf          -inf    | -inf   -inf   -inf
    f       | -inf   f+g    +inf          f       | +inf   f-g    -inf
    +inf    | +inf   +inf   +inf          +inf    | +inf   +inf   -inf

All finite values are exact :class:`fractions.Fraction` objects.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Union

__all__ = [
    "ExtReal",
    "INF",
    "NEG_INF",
    "ZERO",
    "ext",
    "inf_add",
    "inf_residual",
    "scale",
    "parse_rational",
    "format_rational",
]

Number = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p"`` or ``"p/q"``; decimals and floats are rejected."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational: {text!r}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"malformed rational {text!r} (expected 'p' or 'p/q')")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


@total_ordering
@dataclass(frozen=True)
class ExtReal:
    """An element of R u {-inf, +inf}.

    ``kind`` is -1 for -inf, 0 for a finite value and +1 for +inf.
    """

    kind: int
    value: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if self.kind not in (-1, 0, 1):
            raise ValueError("kind must be -1, 0 or 1")
        if self.kind != 0 and self.value != 0:
            object.__setattr__(self, "value", Fraction(0))

    @classmethod
    def finite(cls, v: Number | str) -> ExtReal:
        return cls(0, parse_rational(v))

    @property
    def is_finite(self) -> bool:
        return self.kind == 0

    @property
    def is_pos_inf(self) -> bool:
        return self.kind == 1

    @property
    def is_neg_inf(self) -> bool:
        return self.kind == -1

    def _key(self) -> tuple[int, Fraction]:
        return (self.kind, self.value)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.kind == 0 and self.value == other
        if not isinstance(other, ExtReal):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __lt__(self, other: object) -> bool:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self._key() < other._key()

    def __neg__(self) -> ExtReal:
        return ExtReal(-self.kind, -self.value)

    def __str__(self) -> str:
        if self.kind == 1:
            return "+inf"
        if self.kind == -1:
            return "-inf"
        return format_rational(self.value)

    def __repr__(self) -> str:
        return f"ExtReal({self})"

    @classmethod
    def parse(cls, text: str | int | Fraction) -> ExtReal:
        if isinstance(text, str):
            t = text.strip().lower()
            if t in ("+inf", "inf"):
                return INF
            if t == "-inf":
                return NEG_INF
        return cls(0, parse_rational(text))


def _coerce(x: object) -> ExtReal | None:
    if isinstance(x, ExtReal):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return ExtReal(0, Fraction(x))
    return None


INF = ExtReal(1)
NEG_INF = ExtReal(-1)
ZERO = ExtReal(0, Fraction(0))


def ext(x: ExtReal | Number | str) -> ExtReal:
    """Coerce ints, fractions and textual forms to :class:`ExtReal`."""
    if isinstance(x, ExtReal):
        return x
    return ExtReal.parse(x)


def inf_add(r: ExtReal | Number, s: ExtReal | Number) -> ExtReal:
    r, s = ext(r), ext(s)
    # +inf absorbs: the infimum over an empty set
    if r.is_pos_inf or s.is_pos_inf:
        return INF
    if r.is_neg_inf or s.is_neg_inf:
        return NEG_INF
    return ExtReal(0, r.value + s.value)


def inf_residual(r: ExtReal | Number, s: ExtReal | Number) -> ExtReal:
    r, s = ext(r), ext(s)
    if s.is_pos_inf:
        return NEG_INF
    if r.is_neg_inf:
        return NEG_INF
    if s.is_neg_inf or r.is_pos_inf:
        return INF
    return ExtReal(0, r.value - s.value)


def scale(t: Number, r: ExtReal | Number) -> ExtReal:
    """Multiply by a strictly positive rational."""
    t = Fraction(t)
    if t <= 0:
        raise ValueError(f"scale factor must be positive, got {t}")
    r = ext(r)
    if not r.is_finite:
        return r
    return ExtReal(0, t * r.value)
