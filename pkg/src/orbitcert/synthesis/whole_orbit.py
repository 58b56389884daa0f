"""Render a whole-trajectory invariant description as text.

The avoidance certificate covers scales beyond the certified start time.  A
full-time invariant is the union of that eventual piece with the compact
trajectory segment before the start time, rendered here in closed form
(exponentials, cosines, sines and polynomial time factors).  Deciding
whether such a mixed transcendental union is disjoint from an arbitrary
semi-algebraic set is only known to be possible under Schanuel's conjecture,
so this artifact reports the union without claiming that global decision.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from ..exactnum import RealAlgebraic
from ..semialg import format_formula
from .conespec import LOG_VAR, ConeSpec, phase_var_names
from .fatcone import FatConeCertificate

_APPROX_WIDTH = Fraction(1, 10**12)


def _scalar_text(value: RealAlgebraic) -> str:
    if value.is_rational_point():
        return str(value.rational_value())
    minpoly = value.minimal_polynomial()
    if len(minpoly) == 2:
        return str(Fraction(-minpoly[0], minpoly[1]))
    value.refine_below(_APPROX_WIDTH)
    iv = value.rat_interval()
    return f"~{float((iv.lo + iv.hi) / 2):.9g}"


def _coeff_text(coeff) -> str:
    if coeff.is_rational():
        return str(coeff.rational_value())
    return "(" + " + ".join(
        f"{c}*g^{j}" if j else str(c)
        for j, c in enumerate(coeff.coords) if c
    ) + ")"


def _segment_lines(cone: ConeSpec) -> list[str]:
    """Closed-form coordinates of the trajectory on the bounded prefix."""
    rate_texts = [_scalar_text(r) for r in cone.rate_values]
    freq_texts = [_scalar_text(w) for w in cone.phase_frequencies]
    phase_to_class = {}
    for g in range(cone.n_phase_classes):
        cn, sn = phase_var_names(g)
        phase_to_class[cn] = ("cos", g)
        phase_to_class[sn] = ("sin", g)

    lines = []
    for i, gs in enumerate(cone.state):
        terms = []
        for vec, apoly in gs.parts:
            exp_factors = [
                f"exp({rate_texts[c]}*t)" if n == 1
                else f"exp({rate_texts[c]}*t)^{n}"
                for c, n in enumerate(vec) if n and rate_texts[c] != "0"
            ]
            for mono, coeff in apoly.terms:
                factors = [_coeff_text(coeff)] + list(exp_factors)
                for name, pw in mono:
                    if name == LOG_VAR:
                        factors.append("t" if pw == 1 else f"t^{pw}")
                    else:
                        fn, g = phase_to_class[name]
                        base = f"{fn}({freq_texts[g]}*t)"
                        factors.append(base if pw == 1 else f"{base}^{pw}")
                terms.append("*".join(factors))
        lines.append(f"  x{i + 1}(t) = " + (" + ".join(terms) if terms else "0"))
    return lines


def emit_whole_orbit_invariant(
        cone: ConeSpec,
        cert: Optional[FatConeCertificate] = None) -> str:
    """Deterministic text describing the full-time invariant union."""
    out = [
        "whole-orbit invariant",
        "=====================",
        "",
        "The invariant is the union of the closed-form trajectory segment on",
        "the bounded time prefix with the certified eventual piece beyond it.",
        "",
    ]
    if cone.t0 > 0:
        out.append(f"bounded prefix segment (0 <= t <= {cone.t0}):")
        out.extend(_segment_lines(cone))
    else:
        out.append("bounded prefix segment: empty (start time 0; the "
                   "eventual piece covers the whole trajectory).")
    out.append("")
    out.append("eventual piece:")
    if cert is not None:
        out.append(f"  scale threshold s1 = {cert.s1}")
        out.append("  " + format_formula(cert.formula))
    else:
        out.append("  no certificate attached; synthesize one to render the "
                   "eventual-piece formula.")
    out.extend([
        "",
        "caveat: disjointness of this full-time union from a given",
        "semi-algebraic error set is Schanuel-conditional and is not decided",
        "here; only the eventual piece carries an unconditional certificate.",
    ])
    return "\n".join(out) + "\n"
