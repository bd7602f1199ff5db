"""Exact rational scalars and their text form.

Every scalar in this package is a ``fractions.Fraction``: stored reduced,
with a positive denominator, so equal values always have an identical
representation and comparisons are exact.  There is no floating-point
mode anywhere in the core; decimals appear only as optional *additional*
renderings in the CLI.

This module owns the text grammar shared by matrix files, JSON payloads
and the CLI: ``p`` or ``p/q`` with an optional leading minus and a
nonzero denominator (``3/6`` parses to ``1/2``, ``-0/5`` to ``0``).
"""

from __future__ import annotations

import re
from fractions import Fraction

Rational = Fraction

_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def parse_rational(text: str) -> Fraction:
    """Parse a ``p`` or ``p/q`` literal into a reduced Fraction."""
    token = text.strip()
    m = _RATIONAL_RE.match(token)
    if m is None:
        raise ValueError(f"malformed rational literal {token!r}")
    numerator = int(m.group(1))
    if m.group(2) is None:
        return Fraction(numerator)
    denominator = int(m.group(2))
    if denominator == 0:
        raise ValueError(f"zero denominator in rational literal {token!r}")
    return Fraction(numerator, denominator)


def format_rational(value: Fraction | int) -> str:
    """Render a rational as ``p`` or ``p/q``, never as a decimal."""
    q = as_rational(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_rational(value) -> Fraction:
    """Coerce an int, Fraction or literal string to a Fraction.

    Floats are rejected: silently promoting binary floating point would
    break the exactness guarantee of everything downstream.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")
