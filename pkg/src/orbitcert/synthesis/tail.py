"""Eventual-sign analysis of composed orbit polynomials.

Two certification models operate on the same value-grouped data:

* the exact model follows the true orbit (log symbol = log s, scale weights
  exactly s^rho) and is used for the distinguished all-ones phase direction;
* the widened model replaces each rate by a rational box and lets the log
  symbol range freely up to s^eps, which is what the fat-cone certificate
  needs.

Grouping is by exact exponent value.  Vectors sharing a value differ by a
lattice relation, and the widened cone's constraint set forces those weight
products equal, so value-level grouping is sound in both models.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from ..asymptotics import (
    certified_dominance_threshold,
    positive_lower_bound,
    tail_bound_data,
)
from ..errors import PrecisionUnreachable
from ..exactnum.numberfield import FieldElement
from ..intervals import RatInterval, enclose_log, enclose_power_interval, enclose_rational_power
from .conespec import LOG_VAR, ConeSpec, GradedSum

_PRECISIONS = (96, 192, 384)
_COEFF_WIDTH = Fraction(1, 2**64)


def fe_abs_upper(fe: FieldElement, width: Fraction = _COEFF_WIDTH) -> Fraction:
    iv = fe.rat_iv(width)
    return max(abs(iv.lo), abs(iv.hi))


def _iv_abs_upper(iv: RatInterval) -> Fraction:
    return max(abs(iv.lo), abs(iv.hi))


# ---------------------------------------------------------------------------
# exact specialization at one rational phase assignment


@dataclass(frozen=True)
class FieldGroup:
    """One exponent-value group: s^value * (c_0 + c_1 r + ... + c_B r^B)."""

    value: FieldElement
    coeffs: tuple[FieldElement, ...]  # ascending in r; leading nonzero


def specialized_groups(cone: ConeSpec, gs: GradedSum,
                       assign: Mapping[str, Fraction]) -> tuple[FieldGroup, ...]:
    """Exact phase specialization, merged by exponent value, sorted with the
    dominant value first."""
    merged: dict[tuple, list] = {}
    for vec, poly in gs.parts:
        spec = poly.specialize(assign)
        if spec.is_zero():
            continue
        value = cone.exponent_value(vec)
        slot = merged.get(value.coords)
        if slot is None:
            slot = [value, {}]
            merged[value.coords] = slot
        degs = slot[1]
        for mono, coeff in spec.terms:
            if mono and (len(mono) > 1 or mono[0][0] != LOG_VAR):
                raise AssertionError(
                    f"unspecialized variable in {dict(mono)}; only the log "
                    "symbol may remain after phase specialization")
            d = mono[0][1] if mono else 0
            prev = degs.get(d)
            degs[d] = coeff if prev is None else prev + coeff
    zero = cone.embedding.field.from_rational(0)
    groups = []
    for value, degs in merged.values():
        top = max((d for d, c in degs.items() if not c.is_zero()), default=None)
        if top is None:
            continue
        coeffs = tuple(degs.get(d, zero) for d in range(top + 1))
        groups.append(FieldGroup(value, coeffs))
    return tuple(_sort_by_value(groups))


def _sort_by_value(groups):
    out = list(groups)
    for i in range(1, len(out)):
        item = out[i]
        j = i - 1
        while j >= 0 and (out[j].value - item.value).sign() < 0:
            out[j + 1] = out[j]
            j -= 1
        out[j + 1] = item
    return out


def all_ones_assignment(cone: ConeSpec) -> dict[str, Fraction]:
    assign: dict[str, Fraction] = {}
    names = cone.phase_box_names()
    for i, name in enumerate(names):
        assign[name] = Fraction(1) if i % 2 == 0 else Fraction(0)
    return assign


def eventual_sign(groups: Sequence[FieldGroup]) -> int:
    """Sign for all large s along the exact orbit model; 0 iff empty."""
    if not groups:
        return 0
    return groups[0].coeffs[-1].sign()


def constant_value(groups: Sequence[FieldGroup]) -> Optional[FieldElement]:
    """The exact value when the expression does not depend on s at all."""
    if not groups:
        return None
    if len(groups) > 1:
        return None
    g = groups[0]
    if g.value.sign() != 0 or len(g.coeffs) > 1:
        return None
    return g.coeffs[0]


def field_sign_threshold(groups: Sequence[FieldGroup]) -> Fraction:
    """Certified scale beyond which the expression keeps its eventual sign,
    along the exact orbit model."""
    if not groups:
        raise ValueError("sign threshold of an empty expression is undefined")
    head = groups[0]
    top = len(head.coeffs) - 1
    lead = head.coeffs[-1]
    sgn = lead.sign()
    if sgn == 0:
        raise AssertionError("leading group coefficient must be nonzero")
    abs_lead = lead if sgn > 0 else -lead
    if top == 0 and len(groups) == 1:
        return Fraction(2)
    plb = positive_lower_bound(abs_lead)
    if top == 0:
        r1, lower = Fraction(1), plb
    else:
        rest = sum((fe_abs_upper(c) for c in head.coeffs[:-1]), Fraction(0))
        r1, lower = max(Fraction(1), 2 * rest / plb), plb / 2
    tails = []
    for g in groups[1:]:
        gap = head.value - g.value
        a = sum((fe_abs_upper(c) for c in g.coeffs), Fraction(0))
        tails.append(tail_bound_data(gap, len(g.coeffs) - 1, a))
    target = lower / len(tails) if tails else None
    return certified_dominance_threshold(r1, tails, target)


def field_enclosure_at(groups: Sequence[FieldGroup], s,
                       prec_bits: int = 96) -> RatInterval:
    """Certified enclosure of the expression at rational scale s > 1, along
    the exact orbit model."""
    s = Fraction(s)
    if s <= 1:
        raise ValueError("evaluation point must exceed 1")
    width = Fraction(1, 2**prec_bits)
    point = RatInterval.point(s)
    r_iv = enclose_log(point, prec_bits)
    total = RatInterval.point(0)
    for g in groups:
        pw = enclose_power_interval(point, g.value.rat_iv(width), prec_bits)
        poly = RatInterval.point(0)
        for c in reversed(g.coeffs):
            poly = poly * r_iv + c.rat_iv(width)
        total = total + pw * poly
    return total


# ---------------------------------------------------------------------------
# interval specialization over a phase box


@dataclass(frozen=True)
class BoxGroup:
    """One exponent-value group over a phase box: representative exponent
    vector plus interval-enclosed log-polynomial coefficients."""

    value: FieldElement
    rep: tuple[int, ...]
    coeffs: tuple[RatInterval, ...]  # ascending in r; leading structurally nonzero


def box_groups(cone: ConeSpec, gs: GradedSum,
               box: Mapping[str, RatInterval],
               width: Fraction = _COEFF_WIDTH) -> tuple[BoxGroup, ...]:
    """Value-merged interval coefficients of a composed polynomial over one
    phase box, dominant value first."""
    merged: dict[tuple, list] = {}
    for vec, poly in gs.parts:
        value = cone.exponent_value(vec)
        slot = merged.get(value.coords)
        if slot is None:
            slot = [value, vec, {}]
            merged[value.coords] = slot
        else:
            slot[1] = min(slot[1], vec)
        for d, coeff_poly in poly.coefficients_in(LOG_VAR).items():
            prev = slot[2].get(d)
            slot[2][d] = coeff_poly if prev is None else prev + coeff_poly
    out = []
    for value, rep, degs in merged.values():
        top = max((d for d, p in degs.items() if not p.is_zero()), default=None)
        if top is None:
            continue
        coeffs = []
        for d in range(top + 1):
            p = degs.get(d)
            if p is None or p.is_zero():
                coeffs.append(RatInterval.point(0))
            else:
                coeffs.append(p.eval_box(box, width))
        out.append(BoxGroup(value, tuple(rep), tuple(coeffs)))
    return tuple(_sort_by_value(out))


@dataclass(frozen=True)
class PositivityCertificate:
    """Certified strict positivity of one composed polynomial over one phase
    box for every admissible scale at least s_star."""

    s_star: Fraction
    head_radius: Fraction          # log-range radius the head bound needs
    head_log_degree: int


@dataclass(frozen=True)
class BoxOutcome:
    status: str                    # "ok" | "negative" | "split"
    cert: Optional[PositivityCertificate] = None


def _log2_frac(x: Fraction) -> float:
    return math.log2(x.numerator) - math.log2(x.denominator)


def _rational_decay_threshold(tails: Sequence[tuple[Fraction, Fraction]],
                              target: Fraction) -> Fraction:
    """Smallest tried power of two s0 with A * s0^-dec < target for every
    (A, dec) entry, dec > 0; monotone, so valid for all s >= s0."""
    j = 1
    for a, dec in tails:
        if a > 0:
            need = (_log2_frac(a) - _log2_frac(target)) / float(dec)
            if need > 0:
                j = max(j, math.ceil(need) + 1)
    for attempt in range(j, j + 200000):
        s0 = Fraction(2) ** attempt
        ok = True
        for a, dec in tails:
            good = False
            for prec in _PRECISIONS:
                iv = enclose_rational_power(s0, -dec, prec)
                if a * iv.hi < target:
                    good = True
                    break
                if a * iv.lo >= target:
                    break
            if not good:
                ok = False
                break
        if ok:
            return s0
    raise PrecisionUnreachable("decay threshold search did not converge")


def certify_positive_exact(groups: Sequence[BoxGroup]) -> BoxOutcome:
    """Strict eventual positivity over a phase box along the exact orbit
    model (log symbol = log s, exact rates)."""
    if not groups:
        return BoxOutcome("split")
    head = groups[0]
    lead = head.coeffs[-1]
    if lead.hi < 0:
        return BoxOutcome("negative")
    if lead.lo <= 0:
        return BoxOutcome("split")
    top = len(head.coeffs) - 1
    if top == 0:
        r1, lower, radius = Fraction(1), lead.lo, Fraction(1)
    else:
        rest = sum((_iv_abs_upper(c) for c in head.coeffs[:-1]), Fraction(0))
        radius = 2 * rest / lead.lo
        r1, lower = max(Fraction(1), radius), lead.lo / 2
    if top == 0 and len(groups) == 1:
        return BoxOutcome("ok", PositivityCertificate(Fraction(2), Fraction(1), 0))
    tails = []
    for g in groups[1:]:
        gap = head.value - g.value
        a = sum((_iv_abs_upper(c) for c in g.coeffs), Fraction(0))
        tails.append(tail_bound_data(gap, len(g.coeffs) - 1, a))
    target = lower / len(tails) if tails else None
    s_star = certified_dominance_threshold(r1, tails, target)
    return BoxOutcome("ok", PositivityCertificate(s_star, radius, top))


def certify_positive_fat(groups: Sequence[BoxGroup],
                         boxes_lo: Sequence[Fraction],
                         boxes_hi: Sequence[Fraction],
                         eps: Fraction) -> BoxOutcome:
    """Strict positivity over a phase box for every point of the widened
    cone: rates anywhere in their boxes and the log symbol anywhere in
    [delta, s^eps] with delta at least max(1, head radius)."""
    if not groups:
        return BoxOutcome("split")
    head = groups[0]
    lead = head.coeffs[-1]
    if lead.hi < 0:
        return BoxOutcome("negative")
    if lead.lo <= 0:
        return BoxOutcome("split")
    top = len(head.coeffs) - 1
    if top == 0:
        lower, radius = lead.lo, Fraction(1)
    else:
        rest = sum((_iv_abs_upper(c) for c in head.coeffs[:-1]), Fraction(0))
        radius = 2 * rest / lead.lo
        lower = lead.lo / 2
    if len(groups) == 1:
        return BoxOutcome("ok", PositivityCertificate(Fraction(2), radius, top))
    entries = []
    for g in groups[1:]:
        d = tuple(a - b for a, b in zip(head.rep, g.rep))
        minq = Fraction(0)
        for dc, lo, hi in zip(d, boxes_lo, boxes_hi):
            minq += lo * dc if dc >= 0 else hi * dc
        deg = len(g.coeffs) - 1
        dec = minq - eps * deg
        if dec <= 0:
            return BoxOutcome("split")
        a = sum((_iv_abs_upper(c) for c in g.coeffs), Fraction(0))
        entries.append((a, dec))
    target = lower / len(entries)
    s_star = _rational_decay_threshold(entries, target)
    return BoxOutcome("ok", PositivityCertificate(s_star, radius, top))
