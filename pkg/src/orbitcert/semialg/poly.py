"""Sparse multivariate polynomials with exact rational coefficients.

A monomial is a tuple of (variable, power) pairs sorted by variable name
with strictly positive powers; the empty tuple is the constant monomial.
Terms are kept in a canonical order: total degree descending, then the
monomial's expanded variable word (each variable repeated by its power)
ascending.  That order is what the textual grammar round-trips through.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ..intervals import RatInterval

Monomial = tuple[tuple[str, int], ...]


def _mono_key(mono: Monomial):
    expanded = tuple(v for v, p in mono for _ in range(p))
    return (-len(expanded), expanded)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    powers: dict[str, int] = {}
    for v, p in a:
        powers[v] = powers.get(v, 0) + p
    for v, p in b:
        powers[v] = powers.get(v, 0) + p
    return tuple(sorted(powers.items()))


@dataclass(frozen=True)
class Poly:
    """terms: canonical tuple of (monomial, coefficient), coefficient != 0."""

    terms: tuple[tuple[Monomial, Fraction], ...]

    @staticmethod
    def from_terms(pairs: Iterable[tuple[Fraction, Monomial]]) -> "Poly":
        acc: dict[Monomial, Fraction] = {}
        for coeff, mono in pairs:
            mono = tuple(sorted((v, int(p)) for v, p in mono if p))
            if any(p < 0 for _, p in mono):
                raise ValueError("negative powers are not allowed")
            acc[mono] = acc.get(mono, Fraction(0)) + Fraction(coeff)
        terms = tuple(sorted(((m, c) for m, c in acc.items() if c != 0),
                             key=lambda t: _mono_key(t[0])))
        return Poly(terms)

    @staticmethod
    def zero() -> "Poly":
        return Poly(())

    @staticmethod
    def constant(c) -> "Poly":
        return Poly.from_terms([(Fraction(c), ())])

    @staticmethod
    def variable(name: str, power: int = 1) -> "Poly":
        return Poly.from_terms([(Fraction(1), ((name, power),))])

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == () for m, _ in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms[0][1] if self.terms else Fraction(0)

    def variables(self) -> set[str]:
        return {v for m, _ in self.terms for v, _ in m}

    def total_degree(self) -> int:
        return max((sum(p for _, p in m) for m, _ in self.terms), default=0)

    def __add__(self, other: "Poly") -> "Poly":
        return Poly.from_terms([(c, m) for m, c in self.terms]
                               + [(c, m) for m, c in other.terms])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly(tuple((m, -c) for m, c in self.terms))

    def __mul__(self, other: "Poly") -> "Poly":
        pairs = []
        for ma, ca in self.terms:
            for mb, cb in other.terms:
                pairs.append((ca * cb, _mono_mul(ma, mb)))
        return Poly.from_terms(pairs)

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if c == 0:
            return Poly.zero()
        return Poly(tuple((m, k * c) for m, k in self.terms))

    def power(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        out = Poly.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def eval(self, point: Mapping[str, Fraction]) -> Fraction:
        from ..errors import UnboundVariable

        total = Fraction(0)
        for mono, coeff in self.terms:
            v = coeff
            for var, p in mono:
                if var not in point:
                    raise UnboundVariable(f"no value for variable '{var}'")
                v *= Fraction(point[var]) ** p
            total += v
        return total

    def eval_box(self, box: Mapping[str, RatInterval]) -> RatInterval:
        """Exact interval enclosure over a box (no rounding anywhere)."""
        from ..errors import UnboundVariable

        total = RatInterval.point(0)
        for mono, coeff in self.terms:
            acc = RatInterval.point(coeff)
            for var, p in mono:
                if var not in box:
                    raise UnboundVariable(f"no interval for variable '{var}'")
                acc = acc * (box[var] ** p)
            total = total + acc
        return total

    def substitute(self, subs: Mapping[str, "Poly"]) -> "Poly":
        out = Poly.zero()
        for mono, coeff in self.terms:
            term = Poly.constant(coeff)
            for var, p in mono:
                if var in subs:
                    term = term * subs[var].power(p)
                else:
                    term = term * Poly.variable(var, p)
            out = out + term
        return out

    def rename(self, mapping: Mapping[str, str]) -> "Poly":
        return Poly.from_terms([
            (c, tuple((mapping.get(v, v), p) for v, p in m))
            for m, c in self.terms])

    def integerized(self) -> "Poly":
        """Positive-scaled primitive integer version (same sign everywhere)."""
        if not self.terms:
            return self
        from math import gcd, lcm

        den = lcm(*[c.denominator for _, c in self.terms])
        nums = [c * den for _, c in self.terms]
        g = 0
        for n in nums:
            g = gcd(g, abs(int(n)))
        g = g or 1
        return Poly(tuple((m, Fraction(int(n) // g)) for (m, _), n
                          in zip(self.terms, nums)))

    def to_sympy(self, symbols: Mapping[str, object]):
        import sympy

        expr = sympy.Integer(0)
        for mono, coeff in self.terms:
            t = sympy.Rational(coeff.numerator, coeff.denominator)
            for var, p in mono:
                t *= symbols[var] ** p
            expr += t
        return sympy.expand(expr)
