"""Textual encoding of rationals: "p/q" (reduced, q >= 1) or bare integers."""

import re
from fractions import Fraction

from ..errors import ParseError

_RAT_RE = re.compile(r"^(-?\d+)(?:/([1-9]\d*))?$")


def parse_rational(text: str) -> Fraction:
    m = _RAT_RE.match(text.strip()) if isinstance(text, str) else None
    if not m:
        raise ParseError(f"not a rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    return Fraction(num, den)


def format_rational(v: Fraction) -> str:
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"
