"""Certified interval arithmetic.

Ring operations (add, mul, integer powers) use exact Fraction endpoints: no
rounding happens at all. Transcendental enclosures (exp, log, sin, cos,
rational powers) go through mpmath's directed-rounding interval context at a
caller-chosen precision; the resulting dyadic endpoints convert to Fraction
exactly, so soundness is preserved end to end. Tightening an enclosure is
always a matter of calling again with more bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import mpmath
from mpmath import iv as _iv
from mpmath.libmp import (
    from_rational as _from_rational,
    round_ceiling as _round_ceiling,
    round_floor as _round_floor,
    to_rational as _to_rational,
)

_MP_LOCK_PREC_DEFAULT = 53


@dataclass(frozen=True)
class RatInterval:
    """Closed interval [lo, hi] with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(v) -> "RatInterval":
        f = Fraction(v)
        return RatInterval(f, f)

    @staticmethod
    def hull(values: Iterable[Fraction]) -> "RatInterval":
        vs = [Fraction(v) for v in values]
        return RatInterval(min(vs), max(vs))

    def __add__(self, other):
        other = _coerce(other)
        return RatInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return RatInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        products = (self.lo * other.lo, self.lo * other.hi,
                    self.hi * other.lo, self.hi * other.hi)
        return RatInterval(min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("interval division by an interval containing 0")
        inv = RatInterval(1 / other.hi, 1 / other.lo)
        return self * inv

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        if n == 0:
            return RatInterval.point(1)
        if n % 2 == 1 or self.lo >= 0:
            return RatInterval(self.lo**n, self.hi**n)
        if self.hi <= 0:
            return RatInterval(self.hi**n, self.lo**n)
        # even power of a sign-crossing interval
        return RatInterval(Fraction(0), max(self.lo**n, self.hi**n))

    def contains(self, v) -> bool:
        f = Fraction(v)
        return self.lo <= f <= self.hi

    def intersects(self, other: "RatInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def union(self, other: "RatInterval") -> "RatInterval":
        return RatInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def width(self) -> Fraction:
        return self.hi - self.lo

    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def mag(self) -> Fraction:
        """Upper bound on |x| over the interval."""
        return max(abs(self.lo), abs(self.hi))

    def sign(self) -> Optional[int]:
        """1, -1, 0 if the sign of every point is determined, else None."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == 0 == self.hi:
            return 0
        return None

    def __repr__(self):
        return f"[{self.lo}, {self.hi}]"


def _coerce(v) -> RatInterval:
    if isinstance(v, RatInterval):
        return v
    return RatInterval.point(v)


# --- mpmath bridge -----------------------------------------------------------

def _frac_from_mpf_tuple(t) -> Fraction:
    p, q = _to_rational(t)
    return Fraction(p, q)


def _to_iv(x: RatInterval):
    """Sound mpmath interval covering x (endpoints rounded outward exactly)."""
    a = _from_rational(x.lo.numerator, x.lo.denominator, _iv.prec, _round_floor)
    b = _from_rational(x.hi.numerator, x.hi.denominator, _iv.prec, _round_ceiling)
    return _iv.make_mpf((a, b))

def _from_iv(y) -> RatInterval:
    a, b = y._mpi_
    return RatInterval(_frac_from_mpf_tuple(a), _frac_from_mpf_tuple(b))


def _transcendental(fn, x: RatInterval, prec_bits: int) -> RatInterval:
    old = _iv.prec
    try:
        _iv.prec = max(prec_bits, _MP_LOCK_PREC_DEFAULT)
        return _from_iv(fn(_to_iv(x)))
    finally:
        _iv.prec = old


def enclose_exp(x: RatInterval, prec_bits: int = 80) -> RatInterval:
    return _transcendental(_iv.exp, x, prec_bits)


def enclose_log(x: RatInterval, prec_bits: int = 80) -> RatInterval:
    if x.lo <= 0:
        raise ValueError("log enclosure needs a strictly positive interval")
    return _transcendental(_iv.log, x, prec_bits)


def enclose_sin(x: RatInterval, prec_bits: int = 80) -> RatInterval:
    out = _transcendental(_iv.sin, x, prec_bits)
    return RatInterval(max(out.lo, Fraction(-1)), min(out.hi, Fraction(1)))


def enclose_cos(x: RatInterval, prec_bits: int = 80) -> RatInterval:
    out = _transcendental(_iv.cos, x, prec_bits)
    return RatInterval(max(out.lo, Fraction(-1)), min(out.hi, Fraction(1)))


def enclose_rational_power(base: Fraction, exponent: Fraction,
                           prec_bits: int = 80) -> RatInterval:
    """Enclosure of base**exponent for rational base > 0 and rational exponent."""
    base = Fraction(base)
    exponent = Fraction(exponent)
    if base <= 0:
        raise ValueError("rational power enclosure needs base > 0")
    if exponent == 0:
        return RatInterval.point(1)
    if exponent.denominator == 1:
        n = exponent.numerator
        v = base**n if n > 0 else 1 / base ** (-n)
        return RatInterval.point(v)
    old = _iv.prec
    try:
        _iv.prec = max(prec_bits, _MP_LOCK_PREC_DEFAULT)
        b = _to_iv(RatInterval.point(base))
        e = _to_iv(RatInterval.point(exponent))
        return _from_iv(_iv.exp(_iv.log(b) * e))
    finally:
        _iv.prec = old


def enclose_power_interval(base: RatInterval, exponent: RatInterval,
                           prec_bits: int = 80) -> RatInterval:
    """Enclosure of x**y over x in base (>0), y in exponent."""
    if base.lo <= 0:
        raise ValueError("power enclosure needs base > 0")
    old = _iv.prec
    try:
        _iv.prec = max(prec_bits, _MP_LOCK_PREC_DEFAULT)
        b = _to_iv(base)
        e = _to_iv(exponent)
        return _from_iv(_iv.exp(_iv.log(b) * e))
    finally:
        _iv.prec = old
