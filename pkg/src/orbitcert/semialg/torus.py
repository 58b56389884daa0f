"""Torus membership formulas from additive relation lattices.

The group of block phases compatible with the frequencies is cut out of the
product of unit circles by one complex equation per lattice generator:
the product of the phases raised to the generator's exponents equals one.
Each phase is represented by the real variable pair (c_l, s_l) with
c_l^2 + s_l^2 = 1; negative exponents use the conjugate (c_l, -s_l), which
inverts a unit-modulus value.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..spectral.relations import RelationLattice
from .formula import And, Atom, Formula
from .poly import Poly


def torus_var_names(k: int) -> list[tuple[str, str]]:
    return [(f"c{l}", f"s{l}") for l in range(1, k + 1)]


def _complex_poly_mul(a: tuple[Poly, Poly], b: tuple[Poly, Poly]) -> tuple[Poly, Poly]:
    (ar, ai), (br, bi) = a, b
    return (ar * br - ai * bi, ar * bi + ai * br)


def phase_product(exponents: Sequence[int], k: int) -> tuple[Poly, Poly]:
    """Real and imaginary parts of prod_l tau_l^(a_l) over the phase variables."""
    acc = (Poly.constant(1), Poly.zero())
    for l, a in enumerate(exponents, start=1):
        if a == 0:
            continue
        c = Poly.variable(f"c{l}")
        s = Poly.variable(f"s{l}")
        base = (c, s if a > 0 else -s)
        for _ in range(abs(a)):
            acc = _complex_poly_mul(acc, base)
    return acc


def build_torus_formula(rel: RelationLattice) -> Formula:
    """Conjunction defining the phase torus inside the product of circles."""
    k = rel.dimension
    parts: list[Formula] = []
    for cvar, svar in torus_var_names(k):
        circle = (Poly.variable(cvar, 2) + Poly.variable(svar, 2)
                  - Poly.constant(1))
        parts.append(Atom.make(circle, "eq"))
    for gen in rel.basis:
        re_p, im_p = phase_product(gen, k)
        parts.append(Atom.make(re_p - Poly.constant(1), "eq"))
        parts.append(Atom.make(im_p, "eq"))
    return And(tuple(parts))
