"""Exp-log sums: collection, asymptotic sign, certified thresholds, gap data.

Oracles: exact Fraction evaluation for rational-exponent sums, high-precision
mpmath evaluation for sums with irrational algebraic exponents, and
hand-expanded fixtures.
"""

import random
from fractions import Fraction

import mpmath
import pytest

from orbitcert.asymptotics import (
    ExpLogSum,
    ExpLogTerm,
    GapData,
    LogPoly,
    PowerLogSymbol,
    SymbolTable,
    asymptotic_sign,
    collect,
    gap_data,
    sign_threshold,
    verify_threshold,
)
from orbitcert.errors import DegreeCapExceeded, UnboundVariable
from orbitcert.exactnum import (
    RealAlgebraic,
    alg_compare,
    alg_sqrt,
    isolate_real_roots,
)
from orbitcert.semialg import Poly

SQRT2 = isolate_real_roots([-2, 0, 1], positive_only=True)[0]
SQRT3 = isolate_real_roots([-3, 0, 1], positive_only=True)[0]
SQRT5 = isolate_real_roots([-5, 0, 1], positive_only=True)[0]
# positive root of x^2 + 2x - 1, i.e. sqrt(2) - 1
SQRT2_MINUS_1 = isolate_real_roots([-1, 2, 1], positive_only=True)[0]


def exp_ab(a, b=0):
    """The real algebraic number a + b*sqrt(2)."""
    if b == 0:
        return RealAlgebraic.from_rational(a)
    return RealAlgebraic.from_rational(a) + Fraction(b) * SQRT2


def lp(*coeffs):
    """LogPoly with ascending coefficients."""
    return LogPoly.from_coeffs([Fraction(c) for c in coeffs])


def make_sum(spec):
    """Build an ExpLogSum from [(a, b, coeffs)] with exponent a + b*sqrt(2)."""
    return ExpLogSum.from_terms(
        (exp_ab(a, b), lp(*coeffs)) for a, b, coeffs in spec
    )


def mp_sum_sign(spec, s, dps=80):
    """Numeric oracle: sign of sum_i s^(a_i + b_i*sqrt2) * f_i(log s).

    Independent of the library: straight mpmath evaluation.  Asserts the
    result is numerically unambiguous relative to the largest term.
    """
    with mpmath.workdps(dps):
        if isinstance(s, Fraction):
            sv = mpmath.mpf(s.numerator) / s.denominator
        else:
            sv = mpmath.mpf(s)
        r = mpmath.log(sv)
        root2 = mpmath.sqrt(2)
        total = mpmath.mpf(0)
        biggest = mpmath.mpf(0)
        for a, b, coeffs in spec:
            a = Fraction(a)
            e = mpmath.mpf(a.numerator) / a.denominator + b * root2
            f = mpmath.mpf(0)
            for j, c in enumerate(coeffs):
                c = Fraction(c)
                f += (mpmath.mpf(c.numerator) / c.denominator) * r**j
            t = mpmath.power(sv, e) * f
            total += t
            biggest = max(biggest, abs(t))
        if biggest > 0:
            assert abs(total) > biggest * mpmath.mpf(10) ** (-dps + 20), (
                "numeric oracle cannot resolve the sign at this precision"
            )
        if total == 0:
            return 0
        return 1 if total > 0 else -1


class TestLogPoly:
    def test_construction_strips_trailing_zeros(self):
        p = LogPoly.from_coeffs([Fraction(1), Fraction(0), Fraction(0)])
        assert p.coeffs == (Fraction(1),)
        assert p.degree == 0
        assert LogPoly.from_coeffs([]).is_zero
        assert LogPoly.from_coeffs([0, 0]).is_zero
        assert LogPoly.from_coeffs([0, 0]).degree == -1

    def test_arithmetic_matches_fraction_eval(self):
        rng = random.Random(11)
        for _ in range(30):
            a = lp(*[rng.randint(-5, 5) for _ in range(rng.randint(1, 4))])
            b = lp(*[rng.randint(-5, 5) for _ in range(rng.randint(1, 4))])
            x = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
            assert (a + b).eval_rat(x) == a.eval_rat(x) + b.eval_rat(x)
            assert (a * b).eval_rat(x) == a.eval_rat(x) * b.eval_rat(x)
            assert (-a).eval_rat(x) == -a.eval_rat(x)
            assert a.scale(Fraction(3, 7)).eval_rat(x) == a.eval_rat(x) * Fraction(3, 7)

    def test_leading_and_abs_sum(self):
        p = lp(-1, 0, 2)  # 2r^2 - 1
        assert p.degree == 2
        assert p.leading() == 2
        assert p.abs_coeff_sum() == 3
        with pytest.raises(ValueError):
            LogPoly.from_coeffs([]).leading()

    def test_power(self):
        p = lp(1, 1)  # r + 1
        q = p.power(3)  # (r+1)^3 = r^3 + 3r^2 + 3r + 1
        assert q.coeffs == (Fraction(1), Fraction(3), Fraction(3), Fraction(1))
        assert p.power(0).coeffs == (Fraction(1),)


class TestExpLogSumConstruction:
    def test_zero_coefficients_dropped(self):
        s = ExpLogSum.from_terms([(exp_ab(1), lp(0))])
        assert s.is_empty
        assert s.terms == ()

    def test_merge_equal_exponents_from_distinct_representations(self):
        # sqrt(2) constructed twice via different defining data: x^2-2 and
        # the positive root of x^2+2x-1 shifted by 1.
        other_sqrt2 = SQRT2_MINUS_1 + Fraction(1)
        assert alg_compare(SQRT2, other_sqrt2) == 0
        s = ExpLogSum.from_terms([(SQRT2, lp(2)), (other_sqrt2, lp(3))])
        assert len(s.terms) == 1
        assert s.terms[0].coeff == lp(5)

    def test_sorted_descending(self):
        s = make_sum([(0, 0, [1]), (0, 1, [1]), (1, 0, [1])])
        exps = [t.exponent for t in s.terms]
        # sqrt(2) > 1 > 0
        assert alg_compare(exps[0], SQRT2) == 0
        assert alg_compare(exps[1], Fraction(1)) == 0
        assert alg_compare(exps[2], Fraction(0)) == 0

    def test_term_invariant_rejects_zero_coeff(self):
        with pytest.raises(ValueError):
            ExpLogTerm(exp_ab(1), LogPoly.from_coeffs([]))

    def test_add_is_exact_merge(self):
        s1 = make_sum([(1, 0, [2]), (0, 1, [0, 1])])
        s2 = make_sum([(1, 0, [-2]), (2, 0, [5])])
        total = s1 + s2
        # s^1 terms cancel exactly
        assert len(total.terms) == 2
        assert alg_compare(total.terms[0].exponent, Fraction(2)) == 0
        assert alg_compare(total.terms[1].exponent, SQRT2) == 0

    def test_scale_and_neg(self):
        s = make_sum([(1, 0, [1, 2])])
        assert s.scale(Fraction(0)).is_empty
        doubled = s.scale(2)
        assert doubled.terms[0].coeff == lp(2, 4)
        assert (-s).terms[0].coeff == lp(-1, -2)


class TestCollect:
    def table_diag_sqrt2(self):
        return SymbolTable(
            base_exponents=(SQRT2,),
            symbols={"v1": PowerLogSymbol((1,), lp(1))},
        )

    def test_single_diagonal_entry(self):
        res = collect(Poly.variable("v1"), self.table_diag_sqrt2())
        assert len(res.explog_sum.terms) == 1
        t = res.explog_sum.terms[0]
        assert alg_compare(t.exponent, SQRT2) == 0
        assert t.coeff == lp(1)
        assert res.exponent_vectors == ((1,),)

    def test_product_entry_with_log_factor(self):
        # two identical growth rates 1; one entry carries a factor of log s
        table = SymbolTable(
            base_exponents=(RealAlgebraic.from_rational(1),
                            RealAlgebraic.from_rational(1)),
            symbols={
                "v1": PowerLogSymbol((1, 0), lp(1)),
                "v2": PowerLogSymbol((0, 1), lp(0, 1)),
            },
        )
        res = collect(Poly.variable("v1") * Poly.variable("v2"), table)
        assert len(res.explog_sum.terms) == 1
        t = res.explog_sum.terms[0]
        assert alg_compare(t.exponent, Fraction(2)) == 0
        assert t.coeff == lp(0, 1)
        assert res.exponent_vectors == ((1, 1),)

    def test_cancellation_gives_empty_sum(self):
        v1 = Poly.variable("v1")
        res = collect(v1 - v1, self.table_diag_sqrt2())
        assert res.explog_sum.is_empty
        assert res.exponent_vectors == ()

    def test_cancelled_coefficients_still_record_vectors(self):
        # v1 and v3 denote the same power but opposite log-parts; the
        # aggregated exponent vector must be recorded even though the
        # coefficient cancels, because a perturbed exponent vector can
        # split the merged group again.
        table = SymbolTable(
            base_exponents=(SQRT2,),
            symbols={
                "v1": PowerLogSymbol((1,), lp(1)),
                "v3": PowerLogSymbol((1,), lp(-1)),
            },
        )
        res = collect(Poly.variable("v1") + Poly.variable("v3"), table)
        assert res.explog_sum.is_empty
        assert res.exponent_vectors == ((1,),)

    def test_unknown_symbol_rejected(self):
        with pytest.raises(UnboundVariable):
            collect(Poly.variable("nope"), self.table_diag_sqrt2())

    def test_degree_cap(self):
        table = SymbolTable(
            base_exponents=(SQRT2, SQRT3, SQRT5),
            symbols={
                "v1": PowerLogSymbol((1, 0, 0), lp(1)),
                "v2": PowerLogSymbol((0, 1, 0), lp(1)),
                "v3": PowerLogSymbol((0, 0, 1), lp(1)),
            },
        )
        big = Poly.variable("v1") * Poly.variable("v2") * Poly.variable("v3")
        with pytest.raises(DegreeCapExceeded):
            collect(big, table, degree_cap=4)

    def test_constant_monomial(self):
        res = collect(Poly.constant(Fraction(7, 2)), self.table_diag_sqrt2())
        assert len(res.explog_sum.terms) == 1
        t = res.explog_sum.terms[0]
        assert alg_compare(t.exponent, Fraction(0)) == 0
        assert t.coeff == lp(Fraction(7, 2))
        assert res.exponent_vectors == ((0,),)

    def test_linearity_on_random_polynomials(self):
        rng = random.Random(23)
        table = SymbolTable(
            base_exponents=(RealAlgebraic.from_rational(1), SQRT2),
            symbols={
                "w1": PowerLogSymbol((1, 0), lp(1)),
                "w2": PowerLogSymbol((0, 1), lp(1)),
                "w3": PowerLogSymbol((1, 1), lp(0, 1)),
            },
        )
        names = ["w1", "w2", "w3"]

        def random_poly():
            pairs = []
            for _ in range(rng.randint(1, 4)):
                mono = []
                for name in names:
                    p = rng.randint(0, 2)
                    if p:
                        mono.append((name, p))
                pairs.append((Fraction(rng.randint(-4, 4)), tuple(mono)))
            return Poly.from_terms(pairs)

        for _ in range(20):
            r1, r2 = random_poly(), random_poly()
            lhs = collect(r1 + r2, table).explog_sum
            rhs = collect(r1, table).explog_sum + collect(r2, table).explog_sum
            assert len(lhs.terms) == len(rhs.terms)
            for ta, tb in zip(lhs.terms, rhs.terms):
                assert alg_compare(ta.exponent, tb.exponent) == 0
                assert ta.coeff == tb.coeff


class TestAsymptoticSign:
    def test_dominant_irrational_exponent(self):
        s = make_sum([(0, 1, [2]), (1, 0, [0, 0, 0, -5])])
        assert asymptotic_sign(s) == 1

    def test_empty_sum(self):
        assert asymptotic_sign(ExpLogSum.from_terms([])) == 0

    def test_constant_exponent_leading_log_term(self):
        s = make_sum([(0, 0, [-10, 1])])
        assert asymptotic_sign(s) == 1

    def test_negative_leading_coefficient(self):
        s = make_sum([(3, 0, [5, 0, -2]), (1, 0, [100])])
        assert asymptotic_sign(s) == -1


class TestSignThreshold:
    def test_rational_exponents_exact_oracle(self):
        # sum is exactly s - 100 for every s
        s = make_sum([(1, 0, [1]), (0, 0, [-100])])
        s0 = sign_threshold(s)
        assert asymptotic_sign(s) == 1
        assert s0 > 0
        # exact Fraction oracle: sign must already be positive at s0 and stay
        for mult in (1, 2, 3, 4, 10):
            val = Fraction(mult) * s0 - 100
            assert val > 0
        assert verify_threshold(s, s0)
        assert verify_threshold(s, 2 * s0)
        assert verify_threshold(s, 4 * s0)

    def test_irrational_gap(self):
        s = make_sum([(0, 1, [1]), (1, 0, [-1])])
        s0 = sign_threshold(s)
        assert verify_threshold(s, s0)
        assert verify_threshold(s, 2 * s0)
        assert verify_threshold(s, 4 * s0)
        assert mp_sum_sign([(0, 1, [1]), (1, 0, [-1])], s0) == 1
        assert mp_sum_sign([(0, 1, [1]), (1, 0, [-1])], 10 * s0) == 1
        # the defining dominance fact from the fixture: s^(sqrt2 - 1) > 1
        with mpmath.workdps(40):
            sv = mpmath.mpf(s0.numerator) / s0.denominator
            assert mpmath.power(sv, mpmath.sqrt(2) - 1) > 1

    def test_single_constant_term(self):
        s = make_sum([(0, 1, [7])])
        assert sign_threshold(s) == 2

    def test_single_term_with_log_polynomial(self):
        # f(r) = r - 10 flips sign at r = 10, i.e. s = e^10; the threshold
        # must push past it so the asymptotic sign actually holds.
        spec = [(0, 0, [-10, 1])]
        s = make_sum(spec)
        s0 = sign_threshold(s)
        assert asymptotic_sign(s) == 1
        assert verify_threshold(s, s0)
        assert mp_sum_sign(spec, s0) == 1
        with mpmath.workdps(40):
            sv = mpmath.mpf(s0.numerator) / s0.denominator
            assert mpmath.log(sv) >= 10

    def test_empty_sum_rejected(self):
        with pytest.raises(ValueError):
            sign_threshold(ExpLogSum.from_terms([]))

    def test_determinism(self):
        spec = [(2, -1, [3, 1]), (0, 1, [0, 0, 5]), (-1, 0, [9])]
        assert sign_threshold(make_sum(spec)) == sign_threshold(make_sum(spec))

    def test_random_sums_numeric_cross_check(self):
        rng = random.Random(71)
        small_threshold_cases = 0
        for _ in range(100):
            spec = []
            used = set()
            for _ in range(rng.randint(1, 4)):
                a, b = rng.randint(-3, 3), rng.randint(-3, 3)
                if (a, b) in used:
                    continue
                used.add((a, b))
                deg = rng.randint(0, 3)
                coeffs = [rng.randint(-9, 9) for _ in range(deg + 1)]
                if all(c == 0 for c in coeffs):
                    coeffs[-1] = 1
                while coeffs and coeffs[-1] == 0:
                    coeffs.pop()
                spec.append((a, b, coeffs))
            s = make_sum(spec)
            if s.is_empty:
                continue
            asig = asymptotic_sign(s)
            assert asig != 0
            s0 = sign_threshold(s)
            assert verify_threshold(s, s0)
            assert verify_threshold(s, 2 * s0)
            assert verify_threshold(s, 4 * s0)
            # numeric sign at the threshold itself
            assert mp_sum_sign(spec, s0, dps=120) == asig
            for probe in (10**6, 10**9):
                if probe >= s0:
                    small_threshold_cases += 1
                    assert mp_sum_sign(spec, probe) == asig
        assert small_threshold_cases >= 10


class TestGapData:
    def test_spec_fixture_three_exponents(self):
        # exponent values {0, 1, sqrt2} from base (1, sqrt2)
        rho = [RealAlgebraic.from_rational(1), SQRT2]
        vectors = [(0, 0), (1, 0), (0, 1)]
        sums = [make_sum([(0, 0, [1, 0, 1])])]  # degree-2 log polynomial
        gd = gap_data(sums, vectors, rho)
        assert alg_compare(gd.min_exponent_gap, SQRT2_MINUS_1) == 0
        assert alg_compare(gd.max_vector_distance, SQRT2) == 0
        assert gd.max_log_degree == 2
        assert not gd.no_pairs

    def test_integer_exponents(self):
        rho = [RealAlgebraic.from_rational(3)]
        vectors = [(0,), (1,)]
        gd = gap_data([], vectors, rho)
        assert alg_compare(gd.min_exponent_gap, Fraction(3)) == 0
        assert alg_compare(gd.max_vector_distance, Fraction(1)) == 0
        assert gd.max_log_degree == 0

    def test_single_vector_sentinel(self):
        gd = gap_data([], [(1, 2)], [RealAlgebraic.from_rational(1), SQRT2])
        assert gd.no_pairs
        assert gd.min_exponent_gap is None
        assert alg_compare(gd.max_vector_distance, Fraction(0)) == 0

    def test_zero_difference_pairs_excluded_from_gap(self):
        # vectors (1,0) and (0,1) with rho = (1,1): same exponent value, so
        # the only nonzero gaps come from pairs against (0,0)
        rho = [RealAlgebraic.from_rational(1), RealAlgebraic.from_rational(1)]
        vectors = [(0, 0), (1, 0), (0, 1)]
        gd = gap_data([], vectors, rho)
        assert alg_compare(gd.min_exponent_gap, Fraction(1)) == 0
        # max distance includes the (1,-1) difference of the merged pair
        assert alg_compare(gd.max_vector_distance, SQRT2) == 0

    def test_perturbed_exponent_ordering_claim(self):
        # for rational c with |rho - c| <= mu/(2M), every pair ordered by rho
        # keeps a gap of more than mu/2 under c -- checked exactly
        rho = [RealAlgebraic.from_rational(1), SQRT2]
        vectors = [(0, 0), (1, 0), (0, 1), (1, 1)]
        gd = gap_data([], vectors, rho)
        mu = gd.min_exponent_gap
        assert alg_compare(mu, SQRT2_MINUS_1) == 0
        assert alg_compare(gd.max_vector_distance, SQRT2) == 0
        c = (Fraction(1), Fraction(17, 12))
        # check the hypothesis |rho - c| <= mu/(2M) exactly:
        # |sqrt2 - 17/12|^2 <= mu^2 / (8)  since M = sqrt2
        lhs = (SQRT2 - Fraction(17, 12)) * (SQRT2 - Fraction(17, 12))
        rhs = (mu * mu) / Fraction(8)
        assert alg_compare(lhs, rhs) < 0
        for i in range(len(vectors)):
            for j in range(len(vectors)):
                if i == j:
                    continue
                diff = tuple(x - y for x, y in zip(vectors[i], vectors[j]))
                rho_dot = RealAlgebraic.from_rational(diff[0]) + Fraction(diff[1]) * SQRT2
                if rho_dot.sign() <= 0:
                    continue
                c_dot = c[0] * diff[0] + c[1] * diff[1]
                # 2*(c . diff) - mu > 0 exactly
                assert (Fraction(2) * c_dot - mu).sign() > 0

    def test_max_log_degree_across_sums(self):
        sums = [
            make_sum([(1, 0, [1])]),
            make_sum([(0, 1, [0, 0, 0, 4])]),
        ]
        gd = gap_data(sums, [(0, 0)], [RealAlgebraic.from_rational(1), SQRT2])
        assert gd.max_log_degree == 3


class TestAlgSqrt:
    def test_perfect_square(self):
        assert alg_compare(alg_sqrt(Fraction(9, 4)), Fraction(3, 2)) == 0
        assert alg_compare(alg_sqrt(0), Fraction(0)) == 0

    def test_irrational(self):
        assert alg_compare(alg_sqrt(2), SQRT2) == 0
        assert alg_compare(alg_sqrt(Fraction(1, 2)), SQRT2 / Fraction(2)) == 0

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            alg_sqrt(-1)


class TestDump:
    def test_dump_contains_20_digit_enclosure_and_defining_data(self):
        s = make_sum([(0, 1, [-5, 0, 1]), (0, 0, [3])])
        text = s.dump()
        lines = text.splitlines()
        assert len(lines) == 2
        # sqrt(2) to 20 fractional digits appears in the first line
        assert "1.41421356237309504880" in lines[0]
        assert "root" in lines[0]
        assert "[-2, 0, 1]" in lines[0]
        assert lines[0].startswith("s^(")
        assert "* [" in lines[0]
        assert "r^2" in lines[0]
        assert lines[1].endswith("* [3]")

    def test_dump_empty(self):
        assert ExpLogSum.from_terms([]).dump() == "0"
