"""Multivariate polynomials with number-field coefficients.

The orbit expansion mixes coefficients from several real number fields (one
per eigenvalue group).  A FieldEmbedding fixes one compositum field and maps
every source-field element into it, so downstream arithmetic stays inside a
single field.  AlgPoly is a sparse multivariate polynomial over that field
with exact arithmetic, exact specialization, and certified interval
evaluation over boxes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from ..exactnum import DEFAULT_DEGREE_CAP, NumberField, common_field
from ..exactnum.numberfield import FieldElement
from ..intervals import RatInterval
from ..semialg import Poly

Monomial = tuple[tuple[str, int], ...]


class FieldEmbedding:
    """A compositum number field plus verified maps from source fields."""

    def __init__(self, source_fields: Sequence[NumberField],
                 degree_cap: int = DEFAULT_DEGREE_CAP):
        uniq: list[NumberField] = []
        for f in source_fields:
            if not any(f is g for g in uniq):
                uniq.append(f)
        thetas = [f.theta for f in uniq]
        if thetas:
            field, coords = common_field(thetas, degree_cap)
        else:
            field, coords = NumberField.rationals(), []
        self.field = field
        self._theta_images = {id(f): field.element(c)
                              for f, c in zip(uniq, coords)}
        self._sources = uniq

    @property
    def is_rational(self) -> bool:
        return self.field.degree == 1

    def embed(self, x: FieldElement) -> FieldElement:
        """Image of a source-field element in the compositum."""
        if x.field is self.field:
            return x
        theta = self._theta_images.get(id(x.field))
        if theta is None:
            if x.field.degree == 1:
                return self.field.from_rational(x.coords[0])
            raise ValueError("element from an unregistered source field")
        acc = self.field.zero()
        for c in reversed(x.coords):
            acc = acc * theta + Fraction(c)
        return acc

    def embed_rational(self, c) -> FieldElement:
        return self.field.from_rational(Fraction(c))


def _iv_int_pow(iv: RatInterval, n: int) -> RatInterval:
    """Tight enclosure of x^n over an interval, n >= 0."""
    if n == 0:
        return RatInterval.point(1)
    if n == 1:
        return iv
    a, b = iv.lo**n, iv.hi**n
    if n % 2 == 1:
        return RatInterval(min(a, b), max(a, b))
    if iv.lo <= 0 <= iv.hi:
        return RatInterval(Fraction(0), max(a, b))
    return RatInterval(min(a, b), max(a, b))


@dataclass(frozen=True)
class AlgPoly:
    """Sparse multivariate polynomial with coefficients in one number field.

    terms maps a sorted monomial (ascending variable names, powers >= 1) to a
    nonzero FieldElement.
    """

    field: NumberField
    terms: tuple[tuple[Monomial, FieldElement], ...]

    # -- construction -------------------------------------------------------

    @staticmethod
    def zero(field: NumberField) -> "AlgPoly":
        return AlgPoly(field, ())

    @staticmethod
    def constant(field: NumberField, c: FieldElement) -> "AlgPoly":
        if c.is_zero():
            return AlgPoly(field, ())
        return AlgPoly(field, (((), c),))

    @staticmethod
    def from_terms(field: NumberField, items) -> "AlgPoly":
        acc: dict[Monomial, FieldElement] = {}
        for mono, coeff in items:
            mono = tuple(sorted((v, p) for v, p in mono if p))
            prev = acc.get(mono)
            coeff = coeff if prev is None else prev + coeff
            acc[mono] = coeff
        kept = tuple(sorted(((m, c) for m, c in acc.items() if not c.is_zero()),
                            key=lambda item: item[0]))
        return AlgPoly(field, kept)

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def variables(self) -> set[str]:
        return {v for mono, _ in self.terms for v, _ in mono}

    def degree_in(self, var: str) -> int:
        best = 0
        for mono, _ in self.terms:
            for v, p in mono:
                if v == var:
                    best = max(best, p)
        return best

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "AlgPoly") -> "AlgPoly":
        return AlgPoly.from_terms(self.field, self.terms + other.terms)

    def __neg__(self) -> "AlgPoly":
        return AlgPoly(self.field, tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: "AlgPoly") -> "AlgPoly":
        return self + (-other)

    def __mul__(self, other: "AlgPoly") -> "AlgPoly":
        items = []
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                merged: dict[str, int] = {}
                for v, p in m1 + m2:
                    merged[v] = merged.get(v, 0) + p
                mono = tuple(sorted(merged.items()))
                items.append((mono, c1 * c2))
        return AlgPoly.from_terms(self.field, items)

    def scale(self, c) -> "AlgPoly":
        if isinstance(c, FieldElement):
            fe = c
        else:
            fe = self.field.from_rational(Fraction(c))
        if fe.is_zero():
            return AlgPoly(self.field, ())
        return AlgPoly.from_terms(self.field,
                                  ((m, co * fe) for m, co in self.terms))

    # -- evaluation ---------------------------------------------------------

    def specialize(self, assignment: Mapping[str, Fraction]) -> "AlgPoly":
        """Exact partial evaluation at rational values for some variables."""
        items = []
        for mono, coeff in self.terms:
            rest = []
            factor = Fraction(1)
            for v, p in mono:
                if v in assignment:
                    factor *= Fraction(assignment[v]) ** p
                else:
                    rest.append((v, p))
            if factor == 0:
                continue
            items.append((tuple(rest), coeff * factor))
        return AlgPoly.from_terms(self.field, items)

    def eval_exact(self, assignment: Mapping[str, Fraction]) -> FieldElement:
        out = self.specialize(assignment)
        if out.is_zero():
            return self.field.zero()
        if out.terms[0][0] != () or len(out.terms) > 1:
            missing = sorted(out.variables())
            raise ValueError(f"unassigned variables {missing}")
        return out.terms[0][1]

    def eval_box(self, box: Mapping[str, RatInterval],
                 width: Fraction) -> RatInterval:
        """Certified enclosure over a box; coefficients enclosed to width."""
        total = RatInterval.point(0)
        for mono, coeff in self.terms:
            acc = coeff.rat_iv(width)
            for v, p in mono:
                acc = acc * _iv_int_pow(box[v], p)
            total = total + acc
        return total

    def coefficients_in(self, var: str) -> dict[int, "AlgPoly"]:
        """Split by the power of one variable; values omit that variable."""
        buckets: dict[int, list] = {}
        for mono, coeff in self.terms:
            d = 0
            rest = []
            for v, p in mono:
                if v == var:
                    d = p
                else:
                    rest.append((v, p))
            buckets.setdefault(d, []).append((tuple(rest), coeff))
        return {d: AlgPoly.from_terms(self.field, items)
                for d, items in sorted(buckets.items())}

    def to_poly(self, theta_var: Optional[str] = "th") -> Poly:
        """Rational-coefficient rendering: non-rational coefficients become
        polynomials in the field generator variable."""
        pairs = []
        for mono, coeff in self.terms:
            if coeff.is_rational():
                pairs.append((coeff.rational_value(), mono))
                continue
            if theta_var is None:
                raise ValueError(
                    "irrational coefficient with no generator variable")
            for power, c in enumerate(coeff.coords):
                if c == 0:
                    continue
                merged = dict(mono)
                if power:
                    merged[theta_var] = merged.get(theta_var, 0) + power
                pairs.append((Fraction(c), tuple(sorted(merged.items()))))
        return Poly.from_terms(pairs)
