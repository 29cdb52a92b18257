"""Exact nonnegative rationals backed by :class:`fractions.Fraction`.

Wire format is ``"a/b"`` or a bare integer; no floats, no signs, no decimals.
"""

from __future__ import annotations

import re
from fractions import Fraction

_RATIONAL_RE = re.compile(r"(\d+)(?:/(\d+))?")


class RationalFormatError(ValueError):
    pass


def parse_rational(text: str) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise RationalFormatError(f"expected a rational string, got {text!r}")
    if isinstance(text, int):
        if text < 0:
            raise RationalFormatError(f"negative value {text}")
        return Fraction(text)
    m = _RATIONAL_RE.fullmatch(text.strip())
    if m is None:
        raise RationalFormatError(f"not a nonnegative rational: {text!r}")
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise RationalFormatError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(value: Fraction) -> str:
    # str(Fraction) already prints the reduced "a/b" or "a"
    return str(Fraction(value))


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and rational strings; floats are refused."""
    if isinstance(value, float):
        raise TypeError(f"floats are not exact: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    return parse_rational(value)
