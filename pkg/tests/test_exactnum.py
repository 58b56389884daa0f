"""Exact number tower: rationals, polynomials, real algebraic numbers, fields.

Expected values come from sympy (root isolation, minimal polynomials,
numeric evaluation), which shares no code with the implementation under test.
"""

import random
from fractions import Fraction

import pytest
import sympy
from sympy import CRootOf, Poly, Rational, nsimplify, sqrt

from orbitcert.errors import DegreeCapExceeded, ParseError
from orbitcert.exactnum import (
    RealAlgebraic,
    alg_arith,
    alg_compare,
    alg_sign,
    common_field,
    format_rational,
    isolate_real_roots,
    parse_rational,
)
from orbitcert.exactnum.intpoly import (
    poly_degree,
    poly_eval,
    poly_gcd,
    poly_mul,
    poly_squarefree_part,
    sturm_count,
)

X = sympy.Symbol("x")


def sym_poly(coeffs):
    """Ascending coefficient list -> sympy Poly."""
    return Poly(sum(c * X**i for i, c in enumerate(coeffs)), X)


def oracle_real_roots(coeffs):
    """All real roots of the polynomial, as sympy exact numbers, ascending."""
    return sympy.real_roots(sym_poly(coeffs))


def contains_oracle_root(ra, oracle_root):
    lo, hi = ra.interval()
    v = Rational(str(oracle_root.evalf(60)))
    return Rational(lo.numerator, lo.denominator) - Rational(1, 10**40) <= v <= Rational(
        hi.numerator, hi.denominator
    ) + Rational(1, 10**40)


class TestRationalEncoding:
    def test_round_trip(self):
        for s, v in [("3/4", Fraction(3, 4)), ("-2/5", Fraction(-2, 5)),
                     ("7", Fraction(7)), ("-7", Fraction(-7)), ("0", Fraction(0))]:
            assert parse_rational(s) == v
        assert format_rational(Fraction(3, 4)) == "3/4"
        assert format_rational(Fraction(-8, 2)) == "-4"
        assert format_rational(Fraction(0)) == "0"
        assert parse_rational(format_rational(Fraction(-31, 7))) == Fraction(-31, 7)

    def test_rejects_garbage(self):
        for bad in ["", "1/0", "a/b", "1.5", "--3", "1/2/3"]:
            with pytest.raises(ParseError):
                parse_rational(bad)


class TestPolyBasics:
    def test_mul_eval_against_sympy(self):
        rng = random.Random(7)
        for _ in range(25):
            a = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(rng.randint(1, 5))]
            b = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(rng.randint(1, 5))]
            prod = poly_mul(tuple(a), tuple(b))
            pa, pb = sym_poly(a), sym_poly(b)
            want = (pa * pb).as_expr()
            got = sum(c * X**i for i, c in enumerate(prod))
            assert sympy.expand(want - got) == 0
            pt = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
            assert poly_eval(tuple(a), pt) == Fraction(str(pa.as_expr().subs(X, Rational(pt.numerator, pt.denominator))))

    def test_gcd_and_squarefree(self):
        # (x-1)^2 (x+2) : squarefree part is (x-1)(x+2) = x^2+x-2
        p = poly_mul(poly_mul((-1, 1), (-1, 1)), (2, 1))
        sf = poly_squarefree_part(p)
        assert [Fraction(c) for c in sf] == [Fraction(-2), Fraction(1), Fraction(1)]
        g = poly_gcd((-1, 1), (-2, 1))
        assert poly_degree(g) == 0

    def test_sturm_count_matches_oracle(self):
        cases = [
            ([-2, 0, 1], Fraction(0), Fraction(2), 1),   # x^2-2 on (0,2]
            ([-2, 0, 1], Fraction(-2), Fraction(2), 2),
            ([-5, -2, 0, 1], Fraction(-10), Fraction(10), None),  # x^3-2x-5
            ([6, -11, 6, -1], Fraction(0), Fraction(10), None),   # -(x-1)(x-2)(x-3)
        ]
        for coeffs, lo, hi, want in cases:
            if want is None:
                roots = [r for r in oracle_real_roots(coeffs)
                         if Rational(lo.numerator, lo.denominator) < r <= Rational(hi.numerator, hi.denominator)]
                want = len(roots)
            assert sturm_count(tuple(Fraction(c) for c in coeffs), lo, hi) == want


class TestIsolation:
    @pytest.mark.parametrize("coeffs", [
        [-2, 0, 1],            # x^2 - 2
        [-5, -2, 0, 1],        # x^3 - 2x - 5 (one real root)
        [6, -11, 6, -1],       # three rational roots 1,2,3
        [1, 0, -10, 0, 1],     # x^4 - 10x^2 + 1, four real roots
        [2, 0, 0, 1],          # x^3 + 2, one real root (negative)
        [0, 0, 1],             # x^2 (multiple root at 0)
        [1, 0, 1],             # x^2 + 1 (no real roots)
        [-1, 1000000],         # 1000000x - 1
    ])
    def test_against_sympy(self, coeffs):
        got = isolate_real_roots(coeffs)
        want = oracle_real_roots(coeffs)
        # sympy's real_roots reports multiplicities; isolation works on distinct roots
        distinct = []
        for r in want:
            if not distinct or sympy.simplify(distinct[-1] - r) != 0:
                distinct.append(r)
        assert len(got) == len(distinct)
        for ra, root in zip(got, distinct):
            assert contains_oracle_root(ra, root)
        # isolators sorted; shared endpoints are allowed only at non-roots,
        # so the open interiors stay disjoint
        for a, b in zip(got, got[1:]):
            assert a.interval()[1] <= b.interval()[0]

    def test_isolator_invariant(self):
        for ra in isolate_real_roots([1, 0, -10, 0, 1]):
            lo, hi = ra.interval()
            if lo != hi:
                assert poly_eval(ra.poly, lo) != 0
                assert poly_eval(ra.poly, hi) != 0
                assert sturm_count(ra.poly, lo, hi) == 1

    def test_refinement_shrinks(self):
        (r,) = isolate_real_roots([-2, 0, 1], positive_only=True)
        for _ in range(40):
            r.refine()
        lo, hi = r.interval()
        assert hi - lo < Fraction(1, 10**10)
        v = Rational(str(sqrt(2).evalf(50)))
        assert Rational(lo.numerator, lo.denominator) <= v <= Rational(hi.numerator, hi.denominator)


def sqrt_alg(n):
    (r,) = isolate_real_roots([-n, 0, 1], positive_only=True)
    return r


class TestCompareSign:
    def test_basic_order(self):
        s2, s3 = sqrt_alg(2), sqrt_alg(3)
        assert alg_compare(s2, s3) == -1
        assert alg_compare(s3, s2) == 1
        assert alg_compare(s2, s2) == 0
        assert alg_compare(s2, Fraction(3, 2)) == -1
        assert alg_compare(s2, Fraction(7, 5)) == 1

    def test_equal_through_different_polys(self):
        # sqrt(2) as root of x^2-2 and as root of (x^2-2)(x^2-3)'s isolation
        s2 = sqrt_alg(2)
        roots = isolate_real_roots(poly_mul((-2, 0, 1), (-3, 0, 1)))
        match = [r for r in roots if alg_compare(r, s2) == 0]
        assert len(match) == 1

    def test_nested_radical_identity(self):
        # sqrt(5 + 2*sqrt(6)) == sqrt(2) + sqrt(3)
        s2, s3 = sqrt_alg(2), sqrt_alg(3)
        lhs = alg_arith(s2, s3, "add")
        # x^4 - 10x^2 + 1 has sqrt2+sqrt3 as its largest root
        rhs = isolate_real_roots([1, 0, -10, 0, 1])[-1]
        assert alg_compare(lhs, rhs) == 0

    def test_sign(self):
        s2 = sqrt_alg(2)
        assert alg_sign(s2) == 1
        assert alg_sign(alg_arith(s2, s2, "sub")) == 0
        assert alg_sign(alg_arith(Fraction(0), s2, "sub")) == -1
        assert alg_sign(Fraction(0)) == 0
        assert alg_sign(Fraction(-3, 7)) == -1

    def test_close_values_separate(self):
        # sqrt(2) vs 1.41421356 (= 35355339/25000000): tight but unequal
        s2 = sqrt_alg(2)
        assert alg_compare(s2, Fraction(141421356, 10**8)) == 1
        assert alg_compare(s2, Fraction(141421357, 10**8)) == -1


class TestArithmetic:
    def test_sum_minpoly_matches_oracle(self):
        s2, s3 = sqrt_alg(2), sqrt_alg(3)
        s = alg_arith(s2, s3, "add")
        want = sympy.minimal_polynomial(sqrt(2) + sqrt(3), X)
        # defining polynomial must vanish on the oracle value
        got_poly = sym_poly(s.poly)
        assert sympy.rem(got_poly.as_expr(), want, X) == 0 or got_poly.degree() == sympy.Poly(want, X).degree()
        assert [int(c) for c in s.poly] == [1, 0, -10, 0, 1]

    def test_product_and_quotient(self):
        s2, s3 = sqrt_alg(2), sqrt_alg(3)
        s6 = alg_arith(s2, s3, "mul")
        assert alg_compare(s6, sqrt_alg(6)) == 0
        q = alg_arith(s6, s3, "div")
        assert alg_compare(q, s2) == 0
        one = alg_arith(s2, s2, "div")
        assert alg_compare(one, Fraction(1)) == 0

    def test_rational_fast_paths(self):
        s2 = sqrt_alg(2)
        a = alg_arith(s2, Fraction(3, 2), "add")
        v = Rational(str((sqrt(2) + Rational(3, 2)).evalf(50)))
        lo, hi = a.interval()
        assert Rational(lo.numerator, lo.denominator) <= v <= Rational(hi.numerator, hi.denominator)
        b = alg_arith(Fraction(2), s2, "div")  # 2/sqrt2 == sqrt2
        assert alg_compare(b, s2) == 0
        c = alg_arith(s2, Fraction(0), "mul")
        assert alg_sign(c) == 0

    def test_division_by_zero_rejected(self):
        s2 = sqrt_alg(2)
        zero = alg_arith(s2, s2, "sub")
        with pytest.raises(ZeroDivisionError):
            alg_arith(s2, zero, "div")

    def test_degree_cap(self):
        with pytest.raises(DegreeCapExceeded):
            a = sqrt_alg(2)
            for p in (3, 5, 7, 11):
                a = alg_arith(a, sqrt_alg(p), "add", degree_cap=8)

    def test_random_add_sub_round_trip(self):
        rng = random.Random(11)
        prims = [2, 3, 5, 6, 7]
        for _ in range(10):
            a = sqrt_alg(rng.choice(prims))
            b = sqrt_alg(rng.choice(prims))
            back = alg_arith(alg_arith(a, b, "add"), b, "sub")
            assert alg_compare(back, a) == 0


class TestCommonField:
    def test_sqrt2_sqrt3(self):
        s2, s3 = sqrt_alg(2), sqrt_alg(3)
        field, coords = common_field([s2, s3])
        assert field.degree == 4
        assert [abs(int(c)) for c in field.minpoly] == [1, 0, 10, 0, 1]
        # coordinates evaluate back to the inputs (50-digit numeric check)
        theta = Rational(str(CRootOf(sym_poly(field.minpoly).as_expr(), field.theta_index).evalf(60)))
        for coord, want in zip(coords, (sqrt(2), sqrt(3))):
            val = sum(Rational(c.numerator, c.denominator) * theta**i for i, c in enumerate(coord))
            assert abs(val - Rational(str(want.evalf(60)))) < Rational(1, 10**40)

    def test_rational_inputs(self):
        field, coords = common_field([Fraction(1, 2), Fraction(-3)])
        assert field.degree == 1
        assert [c[0] for c in coords] == [Fraction(1, 2), Fraction(-3)]

    def test_mixed_rational_algebraic(self):
        s2 = sqrt_alg(2)
        field, coords = common_field([Fraction(5, 3), s2])
        assert field.degree == 2
        el = field.element(coords[1])
        assert alg_compare(el.to_real_algebraic(), s2) == 0
        el_rat = field.element(coords[0])
        assert el_rat.is_rational() and el_rat.rational_value() == Fraction(5, 3)

    def test_degree_cap_respected(self):
        xs = [sqrt_alg(p) for p in (2, 3, 5, 7)]
        with pytest.raises(DegreeCapExceeded):
            common_field(xs, degree_cap=8)

    def test_field_arithmetic(self):
        s2, s3 = sqrt_alg(2), sqrt_alg(3)
        field, (c2, c3) = common_field([s2, s3])
        a, b = field.element(c2), field.element(c3)
        prod = a * b  # sqrt 6
        assert alg_compare(prod.to_real_algebraic(), sqrt_alg(6)) == 0
        inv = a.inverse()
        assert (a * inv).is_one()
        assert (a * a).rational_value() == Fraction(2)
        assert (a - a).is_zero()
        assert a.sign() == 1 and (-a).sign() == -1 and (a - a).sign() == 0

    def test_field_element_interval(self):
        s2, s3 = sqrt_alg(2), sqrt_alg(3)
        field, (c2, c3) = common_field([s2, s3])
        el = field.element(c2) * field.element(c3)
        lo, hi = el.interval(Fraction(1, 10**20))
        v = Rational(str(sqrt(6).evalf(50)))
        assert hi - lo <= Fraction(1, 10**20)
        assert Rational(lo.numerator, lo.denominator) <= v <= Rational(hi.numerator, hi.denominator)


class TestSerialization:
    def test_algebraic_round_trip(self):
        s2 = sqrt_alg(2)
        d = s2.to_dict()
        assert d["minpoly"] == [-2, 0, 1]
        lo, hi = d["interval"]
        assert parse_rational(lo) <= parse_rational(hi)
        back = RealAlgebraic.from_dict(d)
        assert alg_compare(back, s2) == 0
