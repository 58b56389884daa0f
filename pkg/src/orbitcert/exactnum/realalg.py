"""Real algebraic numbers: squarefree integer defining polynomial + rational isolator.

The representation invariant: `poly` is squarefree, primitive, with positive
leading coefficient, and has exactly one real root in [lo, hi]. Either
lo == hi (the number is that rational) or poly(lo) != 0 != poly(hi) and the
Sturm count of (lo, hi] is one. Refinement bisects the isolator in place;
every predicate that depends on the isolator works on certified rational
endpoints only.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt as _isqrt
from typing import Sequence, Union

from ..errors import DegreeCapExceeded, ParseError
from ..intervals import RatInterval
from .rationals import format_rational, parse_rational
from . import intpoly as ip

DEFAULT_DEGREE_CAP = 64

Number = Union["RealAlgebraic", Fraction, int]


class RealAlgebraic:
    __slots__ = ("poly", "lo", "hi", "_minpoly")

    def __init__(self, poly: Sequence, lo: Fraction, hi: Fraction, _validated=False):
        ints = ip.poly_primitive_int(poly)
        lo, hi = Fraction(lo), Fraction(hi)
        if not _validated:
            sf = ip.poly_primitive_int(ip.poly_squarefree_part(ints))
            if sf != ints:
                raise ValueError("defining polynomial must be squarefree")
            if lo > hi:
                raise ValueError("empty isolator")
            if lo == hi:
                if ip.poly_eval(ints, lo) != 0:
                    raise ValueError("degenerate isolator endpoint is not a root")
            else:
                if ip.poly_eval(ints, lo) == 0 or ip.poly_eval(ints, hi) == 0:
                    raise ValueError("isolator endpoints must not be roots")
                if ip.sturm_count(ints, lo, hi) != 1:
                    raise ValueError("isolator does not contain exactly one root")
        self.poly = ints
        self.lo = lo
        self.hi = hi
        self._minpoly = None

    # --- constructors ---

    @staticmethod
    def from_rational(v) -> "RealAlgebraic":
        v = Fraction(v)
        poly = (-v.numerator, v.denominator)
        if v == 0:
            poly = (0, 1)
        return RealAlgebraic(poly, v, v, _validated=True)

    @staticmethod
    def from_dict(d: dict) -> "RealAlgebraic":
        try:
            poly = [int(c) for c in d["minpoly"]]
            lo = parse_rational(d["interval"][0])
            hi = parse_rational(d["interval"][1])
        except (KeyError, TypeError, IndexError) as e:
            raise ParseError(f"bad algebraic-number encoding: {d!r}") from e
        return RealAlgebraic(poly, lo, hi)

    def to_dict(self) -> dict:
        return {"minpoly": [int(c) for c in self.poly],
                "interval": [format_rational(self.lo), format_rational(self.hi)]}

    # --- basic queries ---

    def interval(self) -> tuple[Fraction, Fraction]:
        return (self.lo, self.hi)

    def rat_interval(self) -> RatInterval:
        return RatInterval(self.lo, self.hi)

    def is_rational_point(self) -> bool:
        return self.lo == self.hi

    def rational_value(self) -> Fraction:
        if not self.is_rational_point():
            raise ValueError("not resolved to a rational point")
        return self.lo

    def degree_bound(self) -> int:
        return ip.poly_degree(self.poly)

    # --- refinement ---

    def refine(self) -> None:
        """Halve (at least) the isolator width."""
        if self.lo == self.hi:
            return
        p = self.poly
        lo, hi = self.lo, self.hi
        m = _nonroot_split_point(p, lo, hi)
        if m is None:
            # the midpoint is the root itself
            mid = (lo + hi) / 2
            self.lo = self.hi = mid
            return
        s_lo = ip.poly_eval(p, lo)
        s_m = ip.poly_eval(p, m)
        if (s_lo > 0) != (s_m > 0):
            self.hi = m
        else:
            self.lo = m

    def refine_below(self, width: Fraction) -> None:
        while self.hi - self.lo > width:
            self.refine()

    # --- predicates ---

    def sign(self) -> int:
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi:
            return 0 if self.lo == 0 else (1 if self.lo > 0 else -1)
        if ip.poly_eval(self.poly, Fraction(0)) == 0:
            # 0 is a root of the defining polynomial inside the isolator,
            # hence it is the unique root there: the number is 0
            self.lo = self.hi = Fraction(0)
            return 0
        while self.lo <= 0 <= self.hi:
            self.refine()
        return 1 if self.lo > 0 else -1

    def __repr__(self):
        return f"RealAlgebraic({list(self.poly)}, [{self.lo}, {self.hi}])"

    # --- arithmetic through module functions ---

    def __add__(self, other):
        return alg_arith(self, _as_number(other), "add")

    def __radd__(self, other):
        return alg_arith(_as_number(other), self, "add")

    def __sub__(self, other):
        return alg_arith(self, _as_number(other), "sub")

    def __rsub__(self, other):
        return alg_arith(_as_number(other), self, "sub")

    def __mul__(self, other):
        return alg_arith(self, _as_number(other), "mul")

    def __rmul__(self, other):
        return alg_arith(_as_number(other), self, "mul")

    def __truediv__(self, other):
        return alg_arith(self, _as_number(other), "div")

    def __rtruediv__(self, other):
        return alg_arith(_as_number(other), self, "div")

    def __neg__(self):
        return alg_arith(Fraction(0), self, "sub")

    def minimal_polynomial(self) -> tuple[int, ...]:
        """The irreducible factor of `poly` owning this root (cached)."""
        if self._minpoly is not None:
            return self._minpoly
        factors = ip.zz_factor(self.poly)
        if len(factors) == 1:
            self._minpoly = factors[0][0]
            return self._minpoly
        candidates = [f for f, _ in factors]
        while True:
            live = [f for f in candidates if _has_root_in(f, self.lo, self.hi)]
            if len(live) == 1:
                self._minpoly = live[0]
                return self._minpoly
            self.refine()

    def root_index_of_minpoly(self) -> int:
        """Index of this root among the real roots of its minimal polynomial."""
        mp = self.minimal_polynomial()
        roots = isolate_real_roots(mp)
        for idx, r in enumerate(roots):
            if alg_compare(r, self) == 0:
                return idx
        raise RuntimeError("root not found among minimal polynomial roots")


def _as_number(v) -> Number:
    if isinstance(v, RealAlgebraic):
        return v
    return Fraction(v)


def _has_root_in(p, lo: Fraction, hi: Fraction) -> bool:
    if lo == hi:
        return ip.poly_eval(p, lo) == 0
    # widen to a closed count: roots at endpoints matter here
    if ip.poly_eval(p, lo) == 0 or ip.poly_eval(p, hi) == 0:
        return True
    return ip.sturm_count(p, lo, hi) > 0


def _nonroot_split_point(p, lo: Fraction, hi: Fraction):
    """A point near the middle of (lo, hi) that is not a root of p.

    Returns None when the exact midpoint is a root (caller collapses there).
    """
    mid = (lo + hi) / 2
    if ip.poly_eval(p, mid) != 0:
        return mid
    return None


# --- isolation ---------------------------------------------------------------

def isolate_real_roots(poly: Sequence, positive_only: bool = False) -> tuple[RealAlgebraic, ...]:
    """Disjoint isolators for the distinct real roots, ascending.

    Works on the squarefree part, so input multiplicities are irrelevant.
    """
    sf = ip.poly_primitive_int(ip.poly_squarefree_part(ip.poly_normalize(poly)))
    if ip.poly_degree(sf) < 1:
        return ()
    seq = ip.sturm_sequence(tuple(Fraction(c) for c in sf))
    bound = ip.cauchy_root_bound(sf)
    lo0 = Fraction(0) if positive_only else -bound
    out: list[RealAlgebraic] = []

    def emit(lo: Fraction, hi: Fraction):
        # exactly one root in (lo, hi]; normalize endpoints off roots
        if ip.poly_eval(sf, hi) == 0:
            out.append(RealAlgebraic(sf, hi, hi, _validated=True))
            return
        # p(lo) != 0 by construction of split points
        out.append(RealAlgebraic(sf, lo, hi, _validated=True))

    def recurse(lo: Fraction, hi: Fraction, n: int):
        if n == 0:
            return
        if n == 1:
            emit(lo, hi)
            return
        m = _split_avoiding_roots(sf, lo, hi)
        left = ip.sturm_count(sf, lo, m, seq)
        recurse(lo, m, left)
        recurse(m, hi, n - left)

    if positive_only and ip.poly_eval(sf, lo0) == 0:
        # count on (0, bound] misses nothing; a root at 0 is excluded on purpose
        pass
    total = ip.sturm_count(sf, lo0, bound, seq)
    recurse(lo0, bound, total)
    return tuple(out)


def _split_avoiding_roots(p, lo: Fraction, hi: Fraction) -> Fraction:
    """A split point strictly inside (lo, hi) where p does not vanish."""
    width = hi - lo
    for k in (2, 3, 5, 7, 11, 13, 17, 19, 23):
        m = lo + width / k
        if ip.poly_eval(p, m) != 0:
            return m
    # p has at most deg roots; scan a denser grid deterministically
    denom = 2 * (ip.poly_degree(p) + 2)
    for j in range(1, denom):
        m = lo + width * Fraction(j, denom)
        if ip.poly_eval(p, m) != 0:
            return m
    raise RuntimeError("could not find a non-root split point")


# --- comparison and sign -----------------------------------------------------

def alg_sign(x: Number) -> int:
    if isinstance(x, RealAlgebraic):
        return x.sign()
    v = Fraction(x)
    return 0 if v == 0 else (1 if v > 0 else -1)


def alg_compare(a: Number, b: Number) -> int:
    """-1, 0, 1 ordering a against b; exact."""
    a_alg = isinstance(a, RealAlgebraic)
    b_alg = isinstance(b, RealAlgebraic)
    if not a_alg and not b_alg:
        fa, fb = Fraction(a), Fraction(b)
        return 0 if fa == fb else (1 if fa > fb else -1)
    if not a_alg:
        return -_compare_with_rational(b, Fraction(a))
    if not b_alg:
        return _compare_with_rational(a, Fraction(b))
    return _compare_algebraic(a, b)


def _compare_with_rational(a: RealAlgebraic, r: Fraction) -> int:
    if a.is_rational_point():
        v = a.rational_value()
        return 0 if v == r else (1 if v > r else -1)
    if ip.poly_eval(a.poly, r) == 0 and a.lo <= r <= a.hi:
        # r is the unique root in the isolator
        a.lo = a.hi = r
        return 0
    while a.lo <= r <= a.hi:
        a.refine()
        if a.is_rational_point():
            v = a.rational_value()
            return 0 if v == r else (1 if v > r else -1)
    return 1 if a.lo > r else -1


def _compare_algebraic(a: RealAlgebraic, b: RealAlgebraic) -> int:
    if a.is_rational_point():
        return -_compare_with_rational(b, a.rational_value())
    if b.is_rational_point():
        return _compare_with_rational(a, b.rational_value())
    # equality test via common factor in the isolator overlap
    g = ip.poly_gcd(tuple(Fraction(c) for c in a.poly),
                    tuple(Fraction(c) for c in b.poly))
    if ip.poly_degree(g) >= 1:
        olo, ohi = max(a.lo, b.lo), min(a.hi, b.hi)
        if olo <= ohi and _has_root_in(ip.poly_primitive_int(g), olo, ohi):
            # need the common root to be inside BOTH isolators; the overlap is
            if _has_root_in(ip.poly_primitive_int(g), olo, ohi):
                # any root of g in the overlap is a root of a.poly in a's
                # isolator, hence equals a; likewise for b
                return 0
    while a.rat_interval().intersects(b.rat_interval()):
        a.refine()
        b.refine()
        if a.is_rational_point() and b.is_rational_point():
            va, vb = a.rational_value(), b.rational_value()
            return 0 if va == vb else (1 if va > vb else -1)
    return 1 if a.lo > b.hi else -1


# --- arithmetic --------------------------------------------------------------

def alg_arith(a: Number, b: Number, op: str,
              degree_cap: int = DEFAULT_DEGREE_CAP) -> RealAlgebraic:
    """a op b for op in {add, sub, mul, div}; exact, degree-capped."""
    if op not in ("add", "sub", "mul", "div"):
        raise ValueError(f"unknown op {op!r}")
    a_alg = isinstance(a, RealAlgebraic)
    b_alg = isinstance(b, RealAlgebraic)
    if not a_alg and not b_alg:
        fa, fb = Fraction(a), Fraction(b)
        if op == "add":
            return RealAlgebraic.from_rational(fa + fb)
        if op == "sub":
            return RealAlgebraic.from_rational(fa - fb)
        if op == "mul":
            return RealAlgebraic.from_rational(fa * fb)
        if fb == 0:
            raise ZeroDivisionError("division by zero")
        return RealAlgebraic.from_rational(fa / fb)

    if a_alg and a.is_rational_point():
        return alg_arith(a.rational_value(), b, op, degree_cap)
    if b_alg and b.is_rational_point():
        return alg_arith(a, b.rational_value(), op, degree_cap)

    if not a_alg:
        # rational (x) algebraic: transform b's polynomial directly
        fa = Fraction(a)
        if op == "add":
            return _rational_shift(b, fa)
        if op == "sub":
            return _rational_shift(_negate(b), fa)
        if op == "mul":
            if fa == 0:
                return RealAlgebraic.from_rational(0)
            return _rational_scale(b, fa)
        if b.sign() == 0:
            raise ZeroDivisionError("division by zero")
        return _rational_scale(_invert(b), fa)
    if not b_alg:
        fb = Fraction(b)
        if op == "add":
            return _rational_shift(a, fb)
        if op == "sub":
            return _rational_shift(a, -fb)
        if op == "mul":
            if fb == 0:
                return RealAlgebraic.from_rational(0)
            return _rational_scale(a, fb)
        if fb == 0:
            raise ZeroDivisionError("division by zero")
        return _rational_scale(a, 1 / fb)

    if op == "sub":
        return alg_arith(a, _negate(b), "add", degree_cap)
    if op == "div":
        if b.sign() == 0:
            raise ZeroDivisionError("division by zero")
        return alg_arith(a, _invert(b), "mul", degree_cap)

    import sympy

    x, y = ip.sympy_x(), ip.sympy_y()
    pa = ip.to_sympy(tuple(Fraction(c) for c in a.poly), y)
    if op == "add":
        pb_shift = ip.to_sympy(tuple(Fraction(c) for c in b.poly), x).as_expr().subs(x, x - y)
        res = ip.resultant_bivariate(pa.as_expr(), sympy.expand(pb_shift))
        combine = lambda ia, ib: ia + ib
    else:  # mul
        db = ip.poly_degree(b.poly)
        pb_hom = sympy.expand(sum(int(c) * x**i * y ** (db - i)
                                  for i, c in enumerate(b.poly)))
        res = ip.resultant_bivariate(pa.as_expr(), pb_hom)
        combine = lambda ia, ib: ia * ib

    return _root_from_resultant(res, a, b, combine, degree_cap)


def _negate(a: RealAlgebraic) -> RealAlgebraic:
    p = tuple(Fraction(c) * ((-1) ** i) for i, c in enumerate(a.poly))
    return RealAlgebraic(p, -a.hi, -a.lo, _validated=True)


def _invert(a: RealAlgebraic) -> RealAlgebraic:
    s = a.sign()
    if s == 0:
        raise ZeroDivisionError("inverse of zero")
    while a.lo <= 0 <= a.hi:
        a.refine()
    p = tuple(reversed(a.poly))
    poly = ip.poly_primitive_int(p)
    return RealAlgebraic(poly, 1 / a.hi, 1 / a.lo, _validated=True)


def _rational_shift(a: RealAlgebraic, r: Fraction) -> RealAlgebraic:
    """a + r."""
    shifted = ip.poly_compose(tuple(Fraction(c) for c in a.poly), (-r, Fraction(1)))
    return RealAlgebraic(shifted, a.lo + r, a.hi + r, _validated=True)


def _rational_scale(a: RealAlgebraic, r: Fraction) -> RealAlgebraic:
    """a * r, r != 0."""
    # roots of p(x/r)
    scaled = tuple(Fraction(c) / (r**i) for i, c in enumerate(a.poly))
    lo, hi = sorted((a.lo * r, a.hi * r))
    return RealAlgebraic(scaled, lo, hi, _validated=True)


def _root_from_resultant(res, a: RealAlgebraic, b: RealAlgebraic, combine,
                         degree_cap: int) -> RealAlgebraic:
    sf = ip.poly_primitive_int(ip.poly_squarefree_part(res))
    deg = ip.poly_degree(sf)
    if deg > degree_cap:
        raise DegreeCapExceeded(deg, degree_cap, "algebraic arithmetic")
    if deg < 1:
        raise RuntimeError("resultant degenerated; inputs violated invariants")
    sfq = tuple(Fraction(c) for c in sf)
    for _ in range(4000):
        enc = combine(a.rat_interval(), b.rat_interval())
        lo, hi = enc.lo, enc.hi
        if lo == hi:
            if ip.poly_eval(sf, lo) == 0:
                return RealAlgebraic(sf, lo, hi, _validated=True)
        else:
            # widen endpoints off roots of sf deterministically
            pad = (hi - lo) / 64
            while ip.poly_eval(sf, lo) == 0:
                lo -= pad
            while ip.poly_eval(sf, hi) == 0:
                hi += pad
            if ip.sturm_count(sfq, lo, hi) == 1:
                return RealAlgebraic(sf, lo, hi, _validated=True)
        a.refine()
        b.refine()
    raise RuntimeError("failed to isolate the combined root")


def alg_sqrt(v) -> RealAlgebraic:
    """Exact nonnegative square root of a nonnegative rational."""
    v = Fraction(v)
    if v < 0:
        raise ValueError("square root of a negative rational")
    if v == 0:
        return RealAlgebraic.from_rational(0)
    num, den = v.numerator, v.denominator
    rn, rd = _isqrt(num), _isqrt(den)
    if rn * rn == num and rd * rd == den:
        return RealAlgebraic.from_rational(Fraction(rn, rd))
    (root,) = isolate_real_roots([-num, 0, den], positive_only=True)
    return root
