"""Number fields with a real primitive element, and exact coordinates in them.

A field is Q[x]/(minpoly) together with a chosen real root theta of minpoly
(kept as a RealAlgebraic, so its isolator can be refined on demand). Elements
are coordinate vectors over Q in the power basis 1, theta, ..., theta^(n-1).

common_field embeds a batch of real algebraic numbers into one such field via
sympy's primitive-element routine; the returned representations are verified
exactly before use (symbolic vanishing of the defining polynomial composed
with the representation, plus certified interval identification of which
root the representation evaluates to).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import sympy

from ..errors import DegreeCapExceeded
from ..intervals import RatInterval
from . import intpoly as ip
from .realalg import (
    DEFAULT_DEGREE_CAP,
    RealAlgebraic,
    alg_compare,
    isolate_real_roots,
)


class NumberField:
    """Q[x]/(minpoly), optionally embedded in R via a chosen real root theta.

    With ``theta`` set, elements have certified real enclosures and exact
    signs.  With ``theta=None`` the field is a pure quotient ring (used for
    working with an irreducible factor whose roots may all be complex);
    arithmetic and zero tests still work, but embeddings are unavailable.
    """

    def __init__(self, minpoly: Sequence[int], theta: RealAlgebraic | None):
        self.minpoly = tuple(int(c) for c in minpoly)
        self.degree = ip.poly_degree(self.minpoly)
        self.theta = theta
        self._monic = ip.poly_monic(tuple(Fraction(c) for c in self.minpoly))
        self._theta_index = None
        # powers of theta as intervals, cached per refinement state
        self._pow_cache_key = None
        self._pow_cache = None

    @staticmethod
    def rationals() -> "NumberField":
        return NumberField((0, 1), RealAlgebraic.from_rational(0))

    @staticmethod
    def abstract(minpoly: Sequence[int]) -> "NumberField":
        """Quotient ring Q[x]/(minpoly) with no chosen embedding."""
        return NumberField(minpoly, None)

    def _require_embedding(self):
        if self.theta is None:
            raise ValueError("field has no real embedding (abstract quotient ring)")

    @property
    def theta_index(self) -> int:
        """Index of theta among the ascending real roots of minpoly."""
        self._require_embedding()
        if self._theta_index is None:
            roots = isolate_real_roots(self.minpoly)
            for i, r in enumerate(roots):
                if alg_compare(r, self.theta) == 0:
                    self._theta_index = i
                    break
            else:
                raise RuntimeError("theta is not a root of its own minimal polynomial")
        return self._theta_index

    def element(self, coords: Sequence) -> "FieldElement":
        cs = [Fraction(c) for c in coords]
        if len(cs) > self.degree:
            reduced = ip.poly_mod(tuple(cs), self._monic)
            cs = list(reduced)
        cs = cs + [Fraction(0)] * (self.degree - len(cs))
        return FieldElement(self, tuple(cs[: self.degree]))

    def from_rational(self, v) -> "FieldElement":
        return self.element([Fraction(v)] + [Fraction(0)] * (self.degree - 1))

    def zero(self) -> "FieldElement":
        return self.from_rational(0)

    def one(self) -> "FieldElement":
        return self.from_rational(1)

    def theta_element(self) -> "FieldElement":
        if self.degree == 1:
            # theta is rational: the root of the linear minpoly
            return self.from_rational(Fraction(-self.minpoly[0], self.minpoly[1]))
        return self.element([0, 1])

    def theta_powers(self, width: Fraction) -> list[RatInterval]:
        """Intervals for theta^0..theta^(n-1), each of width <= width."""
        self._require_embedding()
        key = (self.theta.lo, self.theta.hi, width)
        if self._pow_cache_key == key:
            return self._pow_cache
        t = self.theta
        # refine so that the largest power is still tight enough
        target = width
        n = self.degree
        while True:
            base = t.rat_interval()
            powers = [RatInterval.point(1)]
            for _ in range(n - 1):
                powers.append(powers[-1] * base)
            if all(p.width() <= target for p in powers) or t.hi == t.lo:
                self._pow_cache_key = (t.lo, t.hi, width)
                self._pow_cache = powers
                return powers
            t.refine()

    def __repr__(self):
        return f"NumberField(deg={self.degree}, minpoly={list(self.minpoly)})"


@dataclass(frozen=True)
class FieldElement:
    field: NumberField
    coords: tuple[Fraction, ...]

    def __add__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field,
                            tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        prod = ip.poly_mul(self.coords, other.coords)
        red = ip.poly_mod(prod, self.field._monic)
        return self.field.element(red)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def _coerce(self, v) -> "FieldElement":
        if isinstance(v, FieldElement):
            if v.field is not self.field:
                raise ValueError("elements of different fields")
            return v
        return self.field.from_rational(Fraction(v))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_one(self) -> bool:
        return self.coords[0] == 1 and all(c == 0 for c in self.coords[1:])

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coords[0]

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        # extended Euclid: u * self + v * minpoly = gcd (= constant, field)
        a = self.field._monic
        b = ip.poly_normalize(self.coords)
        # classic iterative xgcd on polynomials over Q
        r0, r1 = a, b
        t0, t1 = (), (Fraction(1),)
        while not ip.poly_is_zero(r1):
            q, r = ip.poly_divmod(r0, r1)
            r0, r1 = r1, r
            t0, t1 = t1, ip.poly_sub(t0, ip.poly_mul(q, t1))
        if ip.poly_degree(r0) != 0:
            raise ZeroDivisionError("element is a zero divisor; minpoly not irreducible?")
        inv = ip.poly_scale(t0, 1 / r0[0])
        return self.field.element(inv)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == Fraction(other)
        if isinstance(other, FieldElement):
            return self.field is other.field and self.coords == other.coords
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.coords))

    def interval(self, width: Fraction) -> tuple[Fraction, Fraction]:
        """Certified enclosure of the real value, width <= requested."""
        iv = self.rat_iv(width)
        return (iv.lo, iv.hi)

    def rat_iv(self, width: Fraction) -> RatInterval:
        if self.is_rational():
            return RatInterval.point(self.coords[0])
        scale = 1 + max(abs(c) for c in self.coords) * self.field.degree
        inner = Fraction(width) / (4 * scale)
        while True:
            powers = self.field.theta_powers(inner)
            acc = RatInterval.point(0)
            for c, p in zip(self.coords, powers):
                if c != 0:
                    acc = acc + p * c
            if acc.width() <= width:
                return acc
            inner = inner / 16

    def sign(self) -> int:
        """Exact sign; zero is decided by coordinates, nonzero by refinement."""
        if self.is_zero():
            return 0
        if self.is_rational():
            return 1 if self.coords[0] > 0 else -1
        width = Fraction(1, 16)
        while True:
            iv = self.rat_iv(width)
            s = iv.sign()
            if s is not None and s != 0:
                return s
            if s == 0:
                return 0
            width = width / 256

    def to_real_algebraic(self, degree_cap: int = DEFAULT_DEGREE_CAP) -> RealAlgebraic:
        if self.is_rational():
            return RealAlgebraic.from_rational(self.coords[0])
        x, y = ip.sympy_x(), ip.sympy_y()
        minp = ip.to_sympy(tuple(Fraction(c) for c in self.field.minpoly), y)
        h = sum(sympy.Rational(c.numerator, c.denominator) * y**i
                for i, c in enumerate(self.coords))
        res = ip.resultant_bivariate(minp.as_expr(), x - h)
        sf = ip.poly_primitive_int(ip.poly_squarefree_part(res))
        deg = ip.poly_degree(sf)
        if deg > degree_cap:
            raise DegreeCapExceeded(deg, degree_cap, "field element conversion")
        sfq = tuple(Fraction(c) for c in sf)
        width = Fraction(1, 4)
        for _ in range(4000):
            enc = self.rat_iv(width)
            lo, hi = enc.lo, enc.hi
            if lo == hi and ip.poly_eval(sf, lo) == 0:
                return RealAlgebraic(sf, lo, hi, _validated=True)
            pad = (hi - lo) / 64 if hi > lo else Fraction(1, 1024)
            while ip.poly_eval(sf, lo) == 0:
                lo -= pad
            while ip.poly_eval(sf, hi) == 0:
                hi += pad
            if ip.sturm_count(sfq, lo, hi) == 1:
                return RealAlgebraic(sf, lo, hi, _validated=True)
            width = width / 64
        raise RuntimeError("failed to isolate field element as algebraic number")


# --- compositum construction -------------------------------------------------

NumberLike = Union[RealAlgebraic, Fraction, int]


def common_field(xs: Sequence[NumberLike],
                 degree_cap: int = DEFAULT_DEGREE_CAP) -> tuple[NumberField, list[tuple[Fraction, ...]]]:
    """One field containing every input, plus each input's coordinates.

    The compositum is built around a primitive element theta (an integer
    combination of the inputs). Every returned coordinate vector is verified
    exactly against its input before this function returns.
    """
    xs = list(xs)
    irr_idx = [i for i, v in enumerate(xs)
               if isinstance(v, RealAlgebraic) and not v.is_rational_point()]
    if not irr_idx:
        field = NumberField.rationals()
        coords = []
        for v in xs:
            f = v.rational_value() if isinstance(v, RealAlgebraic) else Fraction(v)
            coords.append((f,))
        return field, coords

    gens: list[RealAlgebraic] = [xs[i] for i in irr_idx]
    crootofs = []
    for g in gens:
        mp = g.minimal_polynomial()
        idx = g.root_index_of_minpoly()
        expr = ip.to_sympy(tuple(Fraction(c) for c in mp)).as_expr()
        crootofs.append(sympy.CRootOf(expr, idx))

    z = sympy.Symbol("_theta")
    f, mult_coeffs, reps = sympy.polys.numberfields.primitive_element(
        crootofs, z, ex=True, polys=True)
    deg = f.degree()
    if deg > degree_cap:
        raise DegreeCapExceeded(deg, degree_cap, "common field construction")

    minpoly_int = ip.poly_primitive_int(ip.from_sympy(f))
    theta = _theta_as_algebraic(minpoly_int, gens, mult_coeffs)
    field = NumberField(minpoly_int, theta)

    rep_vectors: list[tuple[Fraction, ...]] = []
    for rep in reps:
        asc = list(reversed([Fraction(c.numerator, c.denominator)
                             for c in map(_as_mpq_fraction, rep)]))
        rep_vectors.append(tuple(asc) + (Fraction(0),) * (field.degree - len(asc)))

    for g, rep in zip(gens, rep_vectors):
        _verify_representation(field, rep, g)

    coords: list[tuple[Fraction, ...]] = []
    it = iter(rep_vectors)
    for i, v in enumerate(xs):
        if i in irr_idx:
            coords.append(next(it))
        else:
            fval = v.rational_value() if isinstance(v, RealAlgebraic) else Fraction(v)
            coords.append((fval,) + (Fraction(0),) * (field.degree - 1))
    return field, coords


def _as_mpq_fraction(c) -> Fraction:
    return Fraction(int(sympy.Rational(c).p), int(sympy.Rational(c).q))


def _theta_as_algebraic(minpoly_int, gens, mult_coeffs) -> RealAlgebraic:
    """theta = sum(mult_coeffs[i] * gens[i]) located among minpoly's roots."""
    sfq = tuple(Fraction(c) for c in minpoly_int)
    for _ in range(4000):
        acc = RatInterval.point(0)
        for c, g in zip(mult_coeffs, gens):
            acc = acc + g.rat_interval() * Fraction(int(c))
        lo, hi = acc.lo, acc.hi
        pad = (hi - lo) / 64 if hi > lo else Fraction(1, 1024)
        if lo == hi:
            if ip.poly_eval(minpoly_int, lo) == 0:
                return RealAlgebraic(minpoly_int, lo, hi, _validated=True)
            lo -= pad or Fraction(1, 1024)
            hi += pad or Fraction(1, 1024)
        while ip.poly_eval(minpoly_int, lo) == 0:
            lo -= pad
        while ip.poly_eval(minpoly_int, hi) == 0:
            hi += pad
        if ip.sturm_count(sfq, lo, hi) == 1:
            return RealAlgebraic(minpoly_int, lo, hi, _validated=True)
        for g in gens:
            g.refine()
    raise RuntimeError("failed to isolate the primitive element")


def _verify_representation(field: NumberField, rep: tuple[Fraction, ...],
                           x: RealAlgebraic) -> None:
    """Exact check that rep(theta) == x.

    Two parts: (1) symbolically, minpoly_x(rep(t)) == 0 mod minpoly_field(t),
    which proves rep(theta) is some root of minpoly_x; (2) certified interval
    separation to identify it as x's root rather than a conjugate.
    """
    mp_x = tuple(Fraction(c) for c in x.minimal_polynomial())
    composed = _compose_mod(mp_x, rep, field._monic)
    if not ip.poly_is_zero(composed):
        raise RuntimeError("primitive element representation failed symbolic check")

    roots = isolate_real_roots(x.minimal_polynomial())
    el = field.element(rep)
    width = Fraction(1, 16)
    for _ in range(2000):
        enc = el.rat_iv(width)
        hits = [r for r in roots
                if enc.intersects(RatInterval(r.lo, r.hi))]
        if len(hits) == 1:
            if alg_compare(hits[0], x) != 0:
                raise RuntimeError("representation identifies a conjugate root")
            return
        if len(hits) == 0:
            # enclosure fell between isolators: refine the root windows
            for r in roots:
                r.refine()
        width = width / 16
    raise RuntimeError("could not identify representation among conjugates")


def _compose_mod(outer: tuple[Fraction, ...], inner: Sequence[Fraction],
                 modulus: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    """outer(inner(t)) mod modulus, over Q."""
    acc: tuple[Fraction, ...] = ()
    inner_t = ip.poly_normalize(inner)
    for c in reversed(ip.poly_normalize(outer)):
        acc = ip.poly_mod(ip.poly_add(ip.poly_mul(acc, inner_t), (c,)), modulus)
    return acc


@dataclass(frozen=True)
class ComplexFieldElement:
    """a + b*i with a, b in one shared number field; exact complex arithmetic."""

    re: FieldElement
    im: FieldElement

    @staticmethod
    def from_real(x: FieldElement) -> "ComplexFieldElement":
        return ComplexFieldElement(x, x.field.zero())

    def field(self) -> NumberField:
        return self.re.field

    def conjugate(self) -> "ComplexFieldElement":
        return ComplexFieldElement(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def is_real(self) -> bool:
        return self.im.is_zero()

    def _coerce(self, v) -> "ComplexFieldElement":
        if isinstance(v, ComplexFieldElement):
            return v
        if isinstance(v, FieldElement):
            return ComplexFieldElement.from_real(v)
        return ComplexFieldElement.from_real(self.re.field.from_rational(Fraction(v)))

    def __add__(self, other):
        o = self._coerce(other)
        return ComplexFieldElement(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexFieldElement(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        return ComplexFieldElement(self.re * o.re - self.im * o.im,
                                   self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inverse(self) -> "ComplexFieldElement":
        n = self.re * self.re + self.im * self.im
        ninv = n.inverse()
        return ComplexFieldElement(self.re * ninv, -(self.im * ninv))

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __eq__(self, other):
        o = self._coerce(other)
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))
