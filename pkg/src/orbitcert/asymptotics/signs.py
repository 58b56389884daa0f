"""Asymptotic sign and certified sign-stability thresholds for exp-log sums.

The threshold scheme: divide through by the dominant power s^e1.  The head
log-polynomial f1 keeps the sign of its leading coefficient once
log s >= r1 = max(1, 2*(sum of non-leading |coeff|)/|lead|), with magnitude at
least |lead|/2 there.  Every other term s^-g * f(log s) (gap g > 0) is bounded
for s >= e by A * (log s)^b * s^-g <= A * (2b/eps)^b * s^(eps-g), using
log u <= u/2, where 0 < eps <= g/2 is rational.  Those bounds decrease in s,
so a single interval-certified check at s0 proves sign stability for every
s >= s0.  The returned s0 is found by doubling, seeded with a float estimate;
no attempt at minimality is made.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ..errors import PrecisionUnreachable
from ..exactnum import RealAlgebraic
from ..intervals import RatInterval, enclose_log, enclose_power_interval
from .explog import ExpLogSum

_PRECISIONS = (96, 192, 384)


def asymptotic_sign(s: ExpLogSum) -> int:
    """Sign of the sum for all sufficiently large s; 0 iff the sum is empty."""
    if s.is_empty:
        return 0
    return 1 if s.terms[0].coeff.leading() > 0 else -1


def _refined_iv(x, width: Fraction) -> RatInterval:
    """Enclosure of width <= width for an exact scalar: a RealAlgebraic or
    any object exposing rat_iv(width)."""
    if hasattr(x, "rat_iv"):
        return x.rat_iv(width)
    x.refine_below(width)
    return x.rat_interval()


def positive_lower_bound(g) -> Fraction:
    """Rational 0 < l <= g for an exactly-positive exact scalar."""
    width = Fraction(1, 4)
    while True:
        iv = _refined_iv(g, width)
        if iv.lo > 0:
            return iv.lo
        width /= 16


_positive_lower_bound = positive_lower_bound


def _log2_frac(x: Fraction) -> float:
    return math.log2(x.numerator) - math.log2(x.denominator)


def _head_bounds(s: ExpLogSum) -> tuple[Fraction, Fraction]:
    """(r1, lower): sign(f1(r)) is the asymptotic sign with |f1(r)| >= lower
    for every r >= r1."""
    f1 = s.terms[0].coeff
    lead = abs(f1.leading())
    if f1.degree == 0:
        return Fraction(1), lead
    rest = sum((abs(c) for c in f1.coeffs[:-1]), Fraction(0))
    r1 = max(Fraction(1), 2 * rest / lead)
    return r1, lead / 2


def _tail_bounds(s: ExpLogSum) -> list[tuple[RealAlgebraic, Fraction, Fraction]]:
    """Per non-dominant term: (gap, eps, coefficient) such that the term's
    magnitude divided by s^e1 is at most coefficient * s^(eps-gap) whenever
    log s >= 1."""
    e1 = s.terms[0].exponent
    return [tail_bound_data(e1 - t.exponent, t.coeff.degree,
                            t.coeff.abs_coeff_sum())
            for t in s.terms[1:]]


def _tri_all(conds) -> bool | None:
    if any(c is False for c in conds):
        return False
    if all(c is True for c in conds):
        return True
    return None


def _certify_threshold(r1: Fraction, tails, target: Fraction | None,
                       s0: Fraction) -> bool:
    point = RatInterval.point(s0)
    for prec in _PRECISIONS:
        width = Fraction(1, 2**prec)
        conds: list[bool | None] = []
        liv = enclose_log(point, prec)
        if liv.lo >= r1:
            conds.append(True)
        elif liv.hi < r1:
            conds.append(False)
        else:
            conds.append(None)
        for gap, eps, coef in tails:
            giv = _refined_iv(gap, width)
            piv = enclose_power_interval(point, RatInterval.point(eps) - giv,
                                         prec)
            if coef * piv.hi < target:
                conds.append(True)
            elif coef * piv.lo >= target:
                conds.append(False)
            else:
                conds.append(None)
        res = _tri_all(conds)
        if res is not None:
            return res
    return False


def certified_dominance_threshold(r1: Fraction, tails,
                                  target: Fraction | None) -> Fraction:
    """Smallest tried power of two s0 such that log(s0) >= r1 and, for each
    (gap, eps, coefficient) tail bound, coefficient * s0^(eps-gap) < target.
    Every bound is monotone in s0, so the certificate extends to all s >= s0.
    Gaps may be RealAlgebraic or any exact scalar exposing rat_iv(width)."""
    # float seed for the doubling index; certification below is exact
    j = max(2, math.ceil(float(r1) / math.log(2)) + 1)
    if target is not None:
        for _gap, eps, coef in tails:
            if coef > 0:
                need = (_log2_frac(coef) - _log2_frac(target)) / float(eps)
                if need > 0:
                    j = max(j, math.ceil(need) + 1)
    for attempt in range(j, j + 200000):
        s0 = Fraction(2) ** attempt
        if _certify_threshold(r1, tails, target, s0):
            return s0
    raise PrecisionUnreachable("sign threshold search did not converge")


def tail_bound_data(gap, log_degree: int, abs_coeff_upper: Fraction):
    """(gap, eps, coefficient) entry for certified_dominance_threshold: the
    term abs_coeff_upper * (log s)^log_degree * s^-gap is bounded by
    coefficient * s^(eps-gap) whenever log s >= 1."""
    eps = positive_lower_bound(gap) / 2
    b = log_degree
    k = Fraction(1) if b == 0 else (Fraction(2 * b) / eps) ** b
    return gap, eps, abs_coeff_upper * k


def sign_threshold(s: ExpLogSum) -> Fraction:
    """Rational s0 >= 2 such that sign(S(s)) = asymptotic_sign(S) for all
    s >= s0, certified by interval arithmetic against monotone bounds."""
    if s.is_empty:
        raise ValueError("sign threshold of an empty sum is undefined")
    m = len(s.terms)
    head = s.terms[0].coeff
    if m == 1 and head.degree == 0:
        return Fraction(2)
    r1, dom_lower = _head_bounds(s)
    tails = _tail_bounds(s)
    target = dom_lower / (m - 1) if m > 1 else None
    return certified_dominance_threshold(r1, tails, target)


def _abs_bounds(iv: RatInterval) -> tuple[Fraction, Fraction]:
    """(lower, upper) bounds of |x| over the interval."""
    if iv.lo > 0:
        return iv.lo, iv.hi
    if iv.hi < 0:
        return -iv.hi, -iv.lo
    return Fraction(0), iv.mag()


def verify_threshold(s: ExpLogSum, s0) -> bool:
    """Certificate check at s0: the dominant term strictly exceeds the sum of
    magnitudes of the remaining terms, and the dominant log-polynomial already
    carries the asymptotic sign.  Pure interval re-verification; independent of
    how s0 was produced."""
    if s.is_empty:
        raise ValueError("threshold verification needs a nonempty sum")
    s0 = Fraction(s0)
    if s0 <= 1:
        return False
    asig = asymptotic_sign(s)
    point = RatInterval.point(s0)
    for prec in _PRECISIONS:
        width = Fraction(1, 2**prec)
        log_iv = enclose_log(point, prec)
        head_sign = s.terms[0].coeff.eval_interval(log_iv).sign()
        if head_sign in (1, -1) and head_sign != asig:
            return False
        if head_sign != asig:
            continue  # undetermined head sign: refine
        term_ivs = []
        for t in s.terms:
            e_iv = _refined_iv(t.exponent, width)
            pw = enclose_power_interval(point, e_iv, prec)
            term_ivs.append(pw * t.coeff.eval_interval(log_iv))
        dom_lo, _ = _abs_bounds(term_ivs[0])
        tail_hi = sum((_abs_bounds(iv)[1] for iv in term_ivs[1:]), Fraction(0))
        if dom_lo > tail_hi:
            return True
    return False
