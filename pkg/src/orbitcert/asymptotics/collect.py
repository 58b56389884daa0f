"""Expansion of polynomials over growth symbols into exp-log sums.

A growth symbol denotes one scalar of the form s^(n . base) * f(log s): an
integer power vector over a list of base growth rates, times a log-polynomial
factor.  Expanding a polynomial over such symbols and merging equal exponents
exactly yields an ExpLogSum; the aggregated integer vectors of every monomial
are recorded (even for monomials whose merged coefficient cancels) because a
perturbed rate vector can split a merged group again, so the downstream gap
analysis must see them all.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Mapping

from ..errors import UnboundVariable
from ..exactnum import DEFAULT_DEGREE_CAP, RealAlgebraic, common_field
from ..semialg import Poly
from .explog import ExpLogSum, ExpLogTerm, LogPoly


@dataclass(frozen=True)
class PowerLogSymbol:
    """One growth symbol: s^(powers . base) * logpoly(log s)."""

    powers: tuple[int, ...]
    logpoly: LogPoly

    def __post_init__(self):
        if self.logpoly.is_zero:
            raise ValueError("symbol log-polynomial must be nonzero")


@dataclass(frozen=True)
class SymbolTable:
    """Base growth rates plus the symbol dictionary used for expansion."""

    base_exponents: tuple[RealAlgebraic, ...]
    symbols: Mapping[str, PowerLogSymbol]

    def __post_init__(self):
        k = len(self.base_exponents)
        for name, sym in self.symbols.items():
            if len(sym.powers) != k:
                raise ValueError(
                    f"symbol '{name}' has a power vector of length "
                    f"{len(sym.powers)}, expected {k}")


@dataclass(frozen=True)
class CollectResult:
    explog_sum: ExpLogSum
    exponent_vectors: tuple[tuple[int, ...], ...]


def collect(poly: Poly, table: SymbolTable,
            degree_cap: int = DEFAULT_DEGREE_CAP) -> CollectResult:
    """Expand poly over the table's symbols into an exact ExpLogSum.

    Exponents are compared inside one common number field, so merging is
    exact; the result is additive in poly.
    """
    k = len(table.base_exponents)
    field, coords = common_field(list(table.base_exponents), degree_cap)
    base_fes = [field.element(c) for c in coords]
    groups: dict[tuple, list] = {}  # field coords -> [field element, LogPoly]
    vectors: set[tuple[int, ...]] = set()
    for mono, coeff in poly.terms:
        vec = [0] * k
        fpart = LogPoly.constant(coeff)
        for var, pw in mono:
            sym = table.symbols.get(var)
            if sym is None:
                raise UnboundVariable(f"no growth symbol named '{var}'")
            for idx in range(k):
                vec[idx] += pw * sym.powers[idx]
            fpart = fpart * sym.logpoly.power(pw)
        vectors.add(tuple(vec))
        fe = field.zero()
        for idx in range(k):
            if vec[idx]:
                fe = fe + base_fes[idx] * Fraction(vec[idx])
        slot = groups.get(fe.coords)
        if slot is None:
            groups[fe.coords] = [fe, fpart]
        else:
            slot[1] = slot[1] + fpart
    kept = [(fe, f) for fe, f in groups.values() if not f.is_zero]
    kept.sort(key=cmp_to_key(lambda a, b: -(a[0] - b[0]).sign()))
    terms = tuple(ExpLogTerm(fe.to_real_algebraic(degree_cap), f)
                  for fe, f in kept)
    return CollectResult(ExpLogSum(terms), tuple(sorted(vectors)))
