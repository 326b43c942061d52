"""Rational helpers on top of :class:`fractions.Fraction`."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

Number = Union[int, Fraction]

_RAT_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


def as_rational(value) -> Number:
    """Coerce ``value`` to an exact int or Fraction (ints stay ints)."""
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return normalize(value)
    if isinstance(value, str):
        return parse_rational(value, strict=False)
    if isinstance(value, float):
        raise TypeError("floats are not accepted on the exact path")
    return normalize(Fraction(value))


def normalize(c: Number) -> Number:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def parse_rational(text: str, strict: bool = True) -> Number:
    """Parse ``"p"`` or ``"p/q"``.

    With ``strict`` the fraction must already be in lowest terms with q > 0,
    which is what the serialization format requires.
    """
    m = _RAT_RE.match(text)
    if m is None:
        raise ValueError(f"not a rational: {text!r}")
    num = int(m.group(1))
    if m.group(2) is None:
        return num
    den = int(m.group(2))
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    value = Fraction(num, den)
    if strict and (value.numerator != num or value.denominator != den):
        raise ValueError(f"unreduced rational: {text!r}")
    return normalize(value)


def format_rational(c: Number) -> str:
    c = normalize(c)
    if isinstance(c, int):
        return str(c)
    return f"{c.numerator}/{c.denominator}"


def div(a: Number, b: Number) -> Number:
    """Exact quotient, staying in ``int`` when possible."""
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r == 0:
            return q
        return Fraction(a, b)
    return normalize(Fraction(a) / b)
