"""Exact sums of terms s^e * f(log s).

Exponents are real algebraic numbers; the log-polynomial coefficients are
rationals.  Sums are kept fully exact: terms with equal exponents are merged
by exact comparison, zero coefficients are dropped, and terms are ordered by
strictly descending exponent so the head term is the asymptotically dominant
one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Sequence, Union

from ..exactnum import RealAlgebraic, alg_compare
from ..intervals import RatInterval, enclose_log, enclose_power_interval


@dataclass(frozen=True)
class LogPoly:
    """Univariate polynomial in r (standing for log s), rational coefficients.

    coeffs are ascending with no trailing zeros; () is the zero polynomial.
    """

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.coeffs and self.coeffs[-1] == 0:
            raise ValueError("trailing zero coefficient; use from_coeffs")

    @staticmethod
    def from_coeffs(coeffs: Iterable) -> "LogPoly":
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return LogPoly(tuple(cs))

    @staticmethod
    def zero() -> "LogPoly":
        return LogPoly(())

    @staticmethod
    def constant(c) -> "LogPoly":
        return LogPoly.from_coeffs([Fraction(c)])

    @staticmethod
    def variable() -> "LogPoly":
        return LogPoly((Fraction(0), Fraction(1)))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def abs_coeff_sum(self) -> Fraction:
        return sum((abs(c) for c in self.coeffs), Fraction(0))

    def __add__(self, other: "LogPoly") -> "LogPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        out = [Fraction(0)] * n
        for i, c in enumerate(self.coeffs):
            out[i] += c
        for i, c in enumerate(other.coeffs):
            out[i] += c
        return LogPoly.from_coeffs(out)

    def __neg__(self) -> "LogPoly":
        return LogPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "LogPoly") -> "LogPoly":
        return self + (-other)

    def __mul__(self, other: "LogPoly") -> "LogPoly":
        if self.is_zero or other.is_zero:
            return LogPoly(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return LogPoly.from_coeffs(out)

    def scale(self, c) -> "LogPoly":
        c = Fraction(c)
        if c == 0:
            return LogPoly(())
        return LogPoly(tuple(c * x for x in self.coeffs))

    def power(self, n: int) -> "LogPoly":
        if n < 0:
            raise ValueError("negative power")
        result = LogPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def eval_rat(self, x) -> Fraction:
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_interval(self, x: RatInterval) -> RatInterval:
        acc = RatInterval.point(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        pieces = []
        for j in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[j]
            if c == 0:
                continue
            mag = abs(c)
            if j == 0:
                body = str(mag)
            else:
                var = "r" if j == 1 else f"r^{j}"
                body = var if mag == 1 else f"{mag}*{var}"
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f" + {body}" if c > 0 else f" - {body}")
        return "".join(pieces)


@dataclass(frozen=True)
class ExpLogTerm:
    """One term s^exponent * coeff(log s)."""

    exponent: RealAlgebraic
    coeff: LogPoly

    def __post_init__(self):
        if self.coeff.is_zero:
            raise ValueError("term coefficient must be nonzero")


TermLike = Union[ExpLogTerm, tuple]


_DEC_SCALE = 10**21  # enclosure width for 20-digit printing


def _dec_str(v: Fraction, digits: int, round_up: bool) -> str:
    scaled = v * 10**digits
    n = scaled.numerator // scaled.denominator
    if round_up and n * scaled.denominator != scaled.numerator:
        n += 1
    sign = "-" if n < 0 else ""
    intpart, frac = divmod(abs(n), 10**digits)
    return f"{sign}{intpart}.{frac:0{digits}d}"


@dataclass(frozen=True)
class ExpLogSum:
    """Exact sum of exp-log terms; distinct exponents, descending order."""

    terms: tuple[ExpLogTerm, ...]

    @staticmethod
    def from_terms(items: Iterable[TermLike]) -> "ExpLogSum":
        merged: list[list] = []  # [exponent, logpoly]
        for item in items:
            if isinstance(item, ExpLogTerm):
                e, c = item.exponent, item.coeff
            else:
                e, c = item
            if not isinstance(e, RealAlgebraic):
                e = RealAlgebraic.from_rational(e)
            if not isinstance(c, LogPoly):
                c = LogPoly.constant(c)
            if c.is_zero:
                continue
            for slot in merged:
                if alg_compare(slot[0], e) == 0:
                    slot[1] = slot[1] + c
                    break
            else:
                merged.append([e, c])
        kept = [(e, c) for e, c in merged if not c.is_zero]
        kept.sort(key=cmp_to_key(lambda a, b: -alg_compare(a[0], b[0])))
        return ExpLogSum(tuple(ExpLogTerm(e, c) for e, c in kept))

    @property
    def is_empty(self) -> bool:
        return not self.terms

    def __add__(self, other: "ExpLogSum") -> "ExpLogSum":
        return ExpLogSum.from_terms(self.terms + other.terms)

    def scale(self, c) -> "ExpLogSum":
        c = Fraction(c)
        if c == 0:
            return ExpLogSum(())
        return ExpLogSum(tuple(ExpLogTerm(t.exponent, t.coeff.scale(c))
                               for t in self.terms))

    def __neg__(self) -> "ExpLogSum":
        return self.scale(-1)

    def max_log_degree(self) -> int:
        return max((t.coeff.degree for t in self.terms), default=0)

    def enclosure_at(self, s, prec_bits: int = 96) -> RatInterval:
        """Certified enclosure of the sum's value at rational s > 1."""
        s = Fraction(s)
        if s <= 0:
            raise ValueError("evaluation point must be positive")
        log_iv = enclose_log(RatInterval.point(s), prec_bits)
        width = Fraction(1, 2**prec_bits)
        total = RatInterval.point(0)
        for t in self.terms:
            t.exponent.refine_below(width)
            pw = enclose_power_interval(RatInterval.point(s),
                                        t.exponent.rat_interval(), prec_bits)
            total = total + pw * t.coeff.eval_interval(log_iv)
        return total

    def dump(self) -> str:
        """Debug rendering: one line per term with a 20-digit exponent
        enclosure plus the exponent's defining polynomial and root index."""
        if not self.terms:
            return "0"
        lines = []
        for t in self.terms:
            t.exponent.refine_below(Fraction(1, _DEC_SCALE))
            lo, hi = t.exponent.interval()
            idx = t.exponent.root_index_of_minpoly()
            poly = list(t.exponent.minimal_polynomial())
            enc = f"[{_dec_str(lo, 20, False)}, {_dec_str(hi, 20, True)}]"
            lines.append(f"s^({enc}; root {idx} of {poly}) * [{t.coeff}]")
        return "\n".join(lines)
