"""First-order formula AST over the ordered real field.

Atoms compare an integer-coefficient polynomial against zero with one of
{gt, ge, eq}.  Connectives are and/or/not; quantifier nodes bind a list of
variables, each optionally with rational box bounds.  Construction through
:meth:`Atom.make` canonicalises the polynomial (primitive integer
coefficients, positive scaling) so equivalent atoms print identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from ..errors import UnboundVariable
from .poly import Poly

RELATIONS = ("gt", "ge", "eq")


class Formula:
    """Base class; nodes are immutable."""

    def variables(self) -> set[str]:
        """Free variables."""
        raise NotImplementedError

    def is_quantifier_free(self) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class Atom(Formula):
    poly: Poly
    rel: str

    @staticmethod
    def make(poly: Poly, rel: str) -> "Atom":
        if rel not in RELATIONS:
            raise ValueError(f"unknown relation {rel!r}")
        return Atom(poly.integerized(), rel)

    def variables(self) -> set[str]:
        return self.poly.variables()

    def is_quantifier_free(self) -> bool:
        return True


@dataclass(frozen=True)
class And(Formula):
    args: tuple[Formula, ...]

    def variables(self) -> set[str]:
        out: set[str] = set()
        for a in self.args:
            out |= a.variables()
        return out

    def is_quantifier_free(self) -> bool:
        return all(a.is_quantifier_free() for a in self.args)


@dataclass(frozen=True)
class Or(Formula):
    args: tuple[Formula, ...]

    def variables(self) -> set[str]:
        out: set[str] = set()
        for a in self.args:
            out |= a.variables()
        return out

    def is_quantifier_free(self) -> bool:
        return all(a.is_quantifier_free() for a in self.args)


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula

    def variables(self) -> set[str]:
        return self.arg.variables()

    def is_quantifier_free(self) -> bool:
        return self.arg.is_quantifier_free()


Binding = tuple[str, Optional[Fraction], Optional[Fraction]]


@dataclass(frozen=True)
class Quant(Formula):
    kind: str  # "forall" | "exists"
    bindings: tuple[Binding, ...]
    body: Formula

    def bound_names(self) -> set[str]:
        return {b[0] for b in self.bindings}

    def variables(self) -> set[str]:
        return self.body.variables() - self.bound_names()

    def is_quantifier_free(self) -> bool:
        return False


def true_atom() -> Atom:
    return Atom(Poly.zero(), "eq")


def false_atom() -> Atom:
    return Atom(Poly.zero(), "gt")


def conj(args: Sequence[Formula]) -> Formula:
    return And(tuple(args))


def disj(args: Sequence[Formula]) -> Formula:
    return Or(tuple(args))


def _atom_truth(value: Fraction, rel: str) -> bool:
    if rel == "gt":
        return value > 0
    if rel == "ge":
        return value >= 0
    return value == 0


def eval_formula(phi: Formula, point: Mapping[str, Fraction]) -> bool:
    """Exact truth value of a quantifier-free formula at a rational point."""
    if isinstance(phi, Atom):
        return _atom_truth(phi.poly.eval(point), phi.rel)
    if isinstance(phi, And):
        return all(eval_formula(a, point) for a in phi.args)
    if isinstance(phi, Or):
        return any(eval_formula(a, point) for a in phi.args)
    if isinstance(phi, Not):
        return not eval_formula(phi.arg, point)
    if isinstance(phi, Quant):
        raise ValueError("eval_formula requires a quantifier-free formula")
    raise TypeError(f"not a formula node: {phi!r}")


def _fresh_name(base: str, taken: set[str]) -> str:
    i = 0
    while True:
        cand = f"{base}_{i}"
        if cand not in taken:
            return cand
        i += 1


def substitute(phi: Formula, subs: Mapping[str, Poly]) -> Formula:
    """Capture-avoiding substitution of polynomials for free variables."""
    if not subs:
        return phi
    if isinstance(phi, Atom):
        return Atom.make(phi.poly.substitute(subs), phi.rel)
    if isinstance(phi, And):
        return And(tuple(substitute(a, subs) for a in phi.args))
    if isinstance(phi, Or):
        return Or(tuple(substitute(a, subs) for a in phi.args))
    if isinstance(phi, Not):
        return Not(substitute(phi.arg, subs))
    if isinstance(phi, Quant):
        bound = phi.bound_names()
        active = {v: p for v, p in subs.items() if v not in bound}
        if not active:
            return phi
        incoming = set()
        for p in active.values():
            incoming |= p.variables()
        clashing = bound & incoming
        bindings = phi.bindings
        body = phi.body
        if clashing:
            taken = (bound | incoming | set(active.keys())
                     | body.variables())
            renames = {v: _fresh_name(v, taken) for v in sorted(clashing)}
            bindings = tuple((renames.get(v, v), lo, hi)
                             for v, lo, hi in bindings)
            body = substitute(body, {v: Poly.variable(n)
                                     for v, n in renames.items()})
        return Quant(phi.kind, bindings, substitute(body, active))
    raise TypeError(f"not a formula node: {phi!r}")


def dnf_atoms(phi: Formula,
              max_terms: int = 4096) -> tuple[tuple[Atom, ...], ...]:
    """Disjunctive normal form of a quantifier-free formula, as a tuple of
    conjunctions of atoms.

    Negation is pushed to the atoms through the exact complements
    not(p > 0) = -p >= 0, not(p >= 0) = -p > 0 and
    not(p = 0) = (p > 0) or (-p > 0).  An empty result means the formula is
    identically false; a result containing an empty conjunction means some
    branch is identically true.  Raises ValueError when the expansion exceeds
    max_terms conjunctions or the formula has quantifiers.
    """

    def rec(node: Formula, neg: bool) -> list[tuple[Atom, ...]]:
        if isinstance(node, Atom):
            if not neg:
                return [(node,)]
            if node.rel == "gt":
                return [(Atom.make(-node.poly, "ge"),)]
            if node.rel == "ge":
                return [(Atom.make(-node.poly, "gt"),)]
            return [(Atom.make(node.poly, "gt"),),
                    (Atom.make(-node.poly, "gt"),)]
        if isinstance(node, Not):
            return rec(node.arg, not neg)
        if isinstance(node, (And, Or)):
            conjunctive = isinstance(node, And) != neg
            parts = [rec(a, neg) for a in node.args]
            if not conjunctive:
                flat = [c for p in parts for c in p]
                if len(flat) > max_terms:
                    raise ValueError("DNF expansion exceeds the size cap")
                return flat
            acc: list[tuple[Atom, ...]] = [()]
            for p in parts:
                acc = [c1 + c2 for c1 in acc for c2 in p]
                if len(acc) > max_terms:
                    raise ValueError("DNF expansion exceeds the size cap")
            return acc
        raise ValueError("DNF expansion requires a quantifier-free formula")

    return tuple(rec(phi, False))
