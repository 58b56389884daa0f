"""Bit-exact textual grammar for formulas (S-expressions).

    formula  := (and formula*) | (or formula*) | (not formula)
              | (forall (binding*) formula) | (exists (binding*) formula)
              | (atom poly relation)
    binding  := (var lo hi) | (var)            ; lo, hi rational
    poly     := (monomial*)                    ; () is the zero polynomial
    monomial := (coeff term*)                  ; coeff nonzero rational
    term     := (var power)                    ; power a positive integer
    relation := gt | ge | eq
    rational := integer | integer/positive-integer
    var      := [A-Za-z_][A-Za-z0-9_]*

Printing is canonical: single spaces, monomials in the polynomial's
canonical term order, term lists sorted by variable name, rationals with
denominator one printed bare.  ``parse_formula(format_formula(f))``
reproduces ``f`` exactly.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

from ..errors import ParseError
from ..exactnum import format_rational, parse_rational
from .formula import And, Atom, Binding, Formula, Not, Or, Quant, RELATIONS
from .poly import Poly

_TOKEN = re.compile(r"\(|\)|[^\s()]+")
_VAR = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

Node = Union[str, list]


def _tokenize(text: str) -> list[str]:
    tokens = _TOKEN.findall(text)
    rebuilt = "".join(tokens)
    if rebuilt != "".join(text.split()):
        raise ParseError("formula text contains unexpected characters")
    return tokens


def _read(tokens: list[str], pos: int) -> tuple[Node, int]:
    if pos >= len(tokens):
        raise ParseError("unexpected end of input")
    tok = tokens[pos]
    if tok == "(":
        items = []
        pos += 1
        while True:
            if pos >= len(tokens):
                raise ParseError("unbalanced parenthesis")
            if tokens[pos] == ")":
                return items, pos + 1
            node, pos = _read(tokens, pos)
            items.append(node)
    if tok == ")":
        raise ParseError("unexpected ')'")
    return tok, pos + 1


def _expect_list(node: Node, what: str) -> list:
    if not isinstance(node, list):
        raise ParseError(f"expected {what}, got {node!r}")
    return node


def _parse_var(node: Node) -> str:
    if not isinstance(node, str) or not _VAR.match(node):
        raise ParseError(f"invalid variable name {node!r}")
    return node


def _parse_poly(node: Node) -> Poly:
    monos = _expect_list(node, "a polynomial (monomial list)")
    pairs = []
    for m in monos:
        m = _expect_list(m, "a monomial")
        if not m:
            raise ParseError("empty monomial")
        if not isinstance(m[0], str):
            raise ParseError("monomial must start with a coefficient")
        coeff = parse_rational(m[0])
        terms = []
        for t in m[1:]:
            t = _expect_list(t, "a (var power) term")
            if len(t) != 2:
                raise ParseError("term must be (var power)")
            var = _parse_var(t[0])
            if not isinstance(t[1], str) or not t[1].isdigit() or int(t[1]) < 1:
                raise ParseError(f"invalid power {t[1]!r} (must be a positive integer)")
            terms.append((var, int(t[1])))
        pairs.append((coeff, tuple(terms)))
    return Poly.from_terms(pairs)


def _parse_bindings(node: Node) -> tuple[Binding, ...]:
    items = _expect_list(node, "a binding list")
    out = []
    for b in items:
        b = _expect_list(b, "a binding (var lo hi) or (var)")
        if len(b) == 1:
            out.append((_parse_var(b[0]), None, None))
        elif len(b) == 3:
            var = _parse_var(b[0])
            if not isinstance(b[1], str) or not isinstance(b[2], str):
                raise ParseError("binding bounds must be rationals")
            out.append((var, parse_rational(b[1]), parse_rational(b[2])))
        else:
            raise ParseError("binding must be (var) or (var lo hi)")
    return tuple(out)


def _build(node: Node) -> Formula:
    items = _expect_list(node, "a formula")
    if not items or not isinstance(items[0], str):
        raise ParseError("formula must start with a keyword")
    head = items[0]
    if head == "atom":
        if len(items) != 3:
            raise ParseError("atom needs (atom poly rel)")
        poly = _parse_poly(items[1])
        rel = items[2]
        if rel not in RELATIONS:
            raise ParseError(f"unknown relation {rel!r}")
        return Atom.make(poly, rel)
    if head in ("and", "or"):
        args = tuple(_build(a) for a in items[1:])
        return And(args) if head == "and" else Or(args)
    if head == "not":
        if len(items) != 2:
            raise ParseError("not needs exactly one argument")
        return Not(_build(items[1]))
    if head in ("forall", "exists"):
        if len(items) != 3:
            raise ParseError(f"{head} needs (bindings) and a body")
        bindings = _parse_bindings(items[1])
        return Quant(head, bindings, _build(items[2]))
    raise ParseError(f"unknown formula keyword {head!r}")


def parse_formula(text: str) -> Formula:
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty formula text")
    node, pos = _read(tokens, 0)
    if pos != len(tokens):
        raise ParseError("trailing tokens after formula")
    return _build(node)


def format_poly(p: Poly) -> str:
    parts = []
    for mono, coeff in p.terms:
        bits = [format_rational(coeff)]
        bits.extend(f"({v} {pw})" for v, pw in mono)
        parts.append("(" + " ".join(bits) + ")")
    return "(" + " ".join(parts) + ")"


def format_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        return f"(atom {format_poly(f.poly)} {f.rel})"
    if isinstance(f, And):
        return "(and" + "".join(" " + format_formula(a) for a in f.args) + ")"
    if isinstance(f, Or):
        return "(or" + "".join(" " + format_formula(a) for a in f.args) + ")"
    if isinstance(f, Not):
        return f"(not {format_formula(f.arg)})"
    if isinstance(f, Quant):
        bs = []
        for var, lo, hi in f.bindings:
            if lo is None:
                bs.append(f"({var})")
            else:
                bs.append(f"({var} {format_rational(lo)} {format_rational(hi)})")
        return f"({f.kind} ({' '.join(bs)}) {format_formula(f.body)})"
    raise TypeError(f"not a formula node: {f!r}")
