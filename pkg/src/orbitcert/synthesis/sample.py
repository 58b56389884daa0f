"""Point sampling on the orbit cone.

Given a scale value and a phase assignment on the relation torus, produce the
corresponding cone point.  Values are exact Fractions whenever every factor
is rational (rational scale powers, unused log symbol, rational phase
evaluation); otherwise certified interval enclosures are returned for the
affected coordinates.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence, Union

from ..errors import NotOnTorus
from ..exactnum.numberfield import FieldElement
from ..intervals import RatInterval, enclose_exp, enclose_log, enclose_power_interval
from ..semialg import build_torus_formula, eval_formula
from ..spectral import reality_check
from .conespec import LOG_VAR, ConeSpec

SampleValue = Union[Fraction, RatInterval]


def _phase_assignment(cone: ConeSpec, torus_point) -> dict[str, Fraction]:
    vals = [Fraction(v) for v in torus_point]
    k = cone.n_phase_classes
    if len(vals) != 2 * k:
        raise ValueError(
            f"torus point needs {2 * k} coordinates (cosine, sine per "
            f"frequency class), got {len(vals)}")
    assign: dict[str, Fraction] = {}
    names = cone.phase_box_names()
    for name, v in zip(names, vals):
        assign[name] = v
    return assign


def _check_torus(cone: ConeSpec, assign: dict[str, Fraction]) -> None:
    formula = build_torus_formula(cone.omega_relations)
    if not eval_formula(formula, assign):
        raise NotOnTorus(
            "phase assignment violates a unit-circle or lattice relation "
            "constraint of the system's torus")
    tau = []
    for b, spec in zip(cone.jordan.blocks, cone.spectral):
        if spec.phase_class is None:
            tau.append((Fraction(1), Fraction(0)))
        else:
            cname, sname = cone.phase_box_names()[2 * spec.phase_class], \
                cone.phase_box_names()[2 * spec.phase_class + 1]
            c, s = assign[cname], assign[sname]
            tau.append((c, s) if b.sign > 0 else (c, -s))
    ok, witness = reality_check(cone.jordan, tau)
    if not ok:
        raise NotOnTorus(
            f"phase assignment leaves the real subspace (entry {witness})")


def _rational_root(x: Fraction, q: int) -> Optional[Fraction]:
    """Exact q-th root of a positive rational if one exists."""
    if x <= 0 or q <= 0:
        return None

    def iroot(n: int) -> Optional[int]:
        if n == 0:
            return 0
        lo, hi = 0, 1
        while hi**q <= n:
            hi *= 2
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if mid**q <= n:
                lo = mid
            else:
                hi = mid
        return lo if lo**q == n else None

    a = iroot(x.numerator)
    if a is None:
        return None
    b = iroot(x.denominator)
    if b is None:
        return None
    return Fraction(a, b)


def _scale_power(s: Fraction, rho, prec_bits: int):
    """s^rho as an exact Fraction when possible, else an enclosure."""
    if s == 1:
        return Fraction(1)
    if rho.is_rational_point():
        q = rho.rational_value()
        if q == 0:
            return Fraction(1)
        base = s if q > 0 else 1 / s
        q = abs(q)
        root = _rational_root(base, q.denominator)
        if root is not None:
            return root ** q.numerator
    width = Fraction(1, 2**prec_bits)
    rho.refine_below(width)
    return enclose_power_interval(RatInterval.point(s), rho.rat_interval(),
                                  prec_bits)


def _coeff_value(fe: FieldElement, width: Fraction):
    if fe.is_rational():
        return fe.rational_value()
    return fe.rat_iv(width)


def _combine(parts, width: Fraction):
    """Sum of products where factors are Fractions or RatIntervals; stays
    exact when every factor is a Fraction."""
    total: SampleValue = Fraction(0)
    for factors in parts:
        acc: SampleValue = Fraction(1)
        for f in factors:
            if isinstance(acc, Fraction) and isinstance(f, Fraction):
                acc = acc * f
            else:
                ai = acc if isinstance(acc, RatInterval) else RatInterval.point(acc)
                fi = f if isinstance(f, RatInterval) else RatInterval.point(f)
                acc = ai * fi
        if isinstance(total, Fraction) and isinstance(acc, Fraction):
            total = total + acc
        else:
            ti = total if isinstance(total, RatInterval) else RatInterval.point(total)
            ai = acc if isinstance(acc, RatInterval) else RatInterval.point(acc)
            total = ti + ai
    return total


def _evaluate(cone: ConeSpec, scales, log_value, assign,
              prec_bits: int) -> tuple[SampleValue, ...]:
    width = Fraction(1, 2**prec_bits)
    out = []
    for gs in cone.state:
        products = []
        for vec, poly in gs.parts:
            spec = poly.specialize(assign)
            for mono, coeff in spec.terms:
                factors = [_coeff_value(coeff, width)]
                for var, p in mono:
                    if var != LOG_VAR:
                        raise AssertionError(
                            f"unexpected free variable '{var}' in sample")
                    if isinstance(log_value, Fraction):
                        factors.append(log_value ** p)
                    else:
                        iv = log_value
                        for _ in range(p - 1):
                            iv = iv * log_value
                        factors.append(iv)
                for c, n in zip(scales, vec):
                    for _ in range(n):
                        factors.append(c)
                products.append(factors)
        out.append(_combine(products, width))
    return tuple(out)


def cone_membership_sample(cone: ConeSpec, s, torus_point=(),
                           prec_bits: int = 96) -> tuple[SampleValue, ...]:
    """Cone point at scale s (s = e^t on the true orbit) and the given torus
    phases; raises NotOnTorus for inadmissible phase assignments."""
    s = Fraction(s)
    if s <= 0:
        raise ValueError("scale must be positive")
    assign = _phase_assignment(cone, torus_point)
    _check_torus(cone, assign)
    scales = [_scale_power(s, rho, prec_bits) for rho in cone.rate_values]
    if s == 1:
        log_value: SampleValue = Fraction(0)
    else:
        needs_log = any(poly.degree_in(LOG_VAR) > 0
                        for gs in cone.state for _, poly in gs.parts)
        log_value = (enclose_log(RatInterval.point(s), prec_bits)
                     if needs_log else Fraction(0))
    return _evaluate(cone, scales, log_value, assign, prec_bits)


def cone_membership_sample_logtime(cone: ConeSpec, t, torus_point=(),
                                   prec_bits: int = 96
                                   ) -> tuple[SampleValue, ...]:
    """Cone point with the scale coordinate given in log time t (so the log
    symbol is exactly t); exact whenever every rate annihilates t."""
    t = Fraction(t)
    assign = _phase_assignment(cone, torus_point)
    _check_torus(cone, assign)
    width = Fraction(1, 2**prec_bits)
    scales = []
    for rho in cone.rate_values:
        if t == 0 or rho.sign() == 0:
            scales.append(Fraction(1))
        else:
            rho.refine_below(width)
            scales.append(enclose_exp(rho.rat_interval()
                                      * RatInterval.point(t), prec_bits))
    return _evaluate(cone, scales, t, assign, prec_bits)
