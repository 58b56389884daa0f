"""Complex algebraic numbers as exact (real, imaginary) component pairs."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .realalg import RealAlgebraic, alg_compare, alg_sign


@dataclass
class ComplexAlgebraic:
    re: RealAlgebraic
    im: RealAlgebraic

    @staticmethod
    def from_real(v) -> "ComplexAlgebraic":
        r = v if isinstance(v, RealAlgebraic) else RealAlgebraic.from_rational(Fraction(v))
        return ComplexAlgebraic(r, RealAlgebraic.from_rational(0))

    def is_real(self) -> bool:
        return alg_sign(self.im) == 0

    def conjugate(self) -> "ComplexAlgebraic":
        return ComplexAlgebraic(self.re, -self.im)

    def equals(self, other: "ComplexAlgebraic") -> bool:
        return (alg_compare(self.re, other.re) == 0
                and alg_compare(self.im, other.im) == 0)

    def __add__(self, other: "ComplexAlgebraic") -> "ComplexAlgebraic":
        return ComplexAlgebraic(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ComplexAlgebraic") -> "ComplexAlgebraic":
        return ComplexAlgebraic(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "ComplexAlgebraic") -> "ComplexAlgebraic":
        return ComplexAlgebraic(self.re * other.re - self.im * other.im,
                                self.re * other.im + self.im * other.re)

    def __neg__(self) -> "ComplexAlgebraic":
        return ComplexAlgebraic(-self.re, -self.im)

    def scale_rational(self, c) -> "ComplexAlgebraic":
        return ComplexAlgebraic(self.re * Fraction(c), self.im * Fraction(c))

    def to_dict(self) -> dict:
        return {"re": self.re.to_dict(), "im": self.im.to_dict()}

    @staticmethod
    def from_dict(d: dict) -> "ComplexAlgebraic":
        return ComplexAlgebraic(RealAlgebraic.from_dict(d["re"]),
                                RealAlgebraic.from_dict(d["im"]))

    def __repr__(self):
        return f"ComplexAlgebraic(re={self.re!r}, im={self.im!r})"
