"""Rigorous three-valued universal checks over compact rational boxes.

``decide_forall_box`` proves a quantifier-free formula on a closed box by
recursive bisection with exact rational interval arithmetic, refutes it
with an exactly-verified rational counterexample, or reports Unknown with
a machine-readable reason.

Proof rules per atom over an enclosure [lo, hi] of the polynomial:
  * ``p > 0``  proven when lo > 0, refuted only when hi < 0;
  * ``p >= 0`` proven when lo >= 0, refuted when hi < 0;
  * ``p = 0``  proven only for the exact zero enclosure, refuted when
    0 is outside [lo, hi].
Refutation deliberately uses the *open* condition hi < 0 even for strict
atoms: a supremum that merely reaches 0 is tangential contact, which this
engine reports as Unknown(tangential-suspected) rather than resolving by
an endpoint convention.

Search order is deterministic: iterative deepening on the bisection depth,
bisecting the widest coordinate (lexicographically first on ties), left
half before right half.  Counterexample candidates at each box are its
midpoint and (for at most 4 variables) its corners; the lexicographically
least falsifying candidate of the first refuting box is returned, so the
witness is found at the shallowest possible depth.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from ..intervals import RatInterval
from .formula import And, Atom, Formula, Not, Or, Quant, eval_formula

_TRUE, _FALSE, _IND = 1, 0, None


@dataclass(frozen=True)
class ThreeValued:
    """Verdict of a rigorous check: true, false (with witness), or unknown."""

    value: str  # "true" | "false" | "unknown"
    reason: Optional[str] = None  # unknown: depth-exhausted | backend-missing
    #                               | tangential-suspected
    witness: Optional[dict] = None  # false: exact rational counterexample

    @staticmethod
    def true() -> "ThreeValued":
        return ThreeValued("true")

    @staticmethod
    def false(witness: dict) -> "ThreeValued":
        return ThreeValued("false", witness=witness)

    @staticmethod
    def unknown(reason: str) -> "ThreeValued":
        return ThreeValued("unknown", reason=reason)

    def is_true(self) -> bool:
        return self.value == "true"

    def is_false(self) -> bool:
        return self.value == "false"


class _Status:
    __slots__ = ("tv", "tangential")

    def __init__(self, tv, tangential: bool):
        self.tv = tv
        self.tangential = tangential


def _atom_status(atom: Atom, box: Mapping[str, RatInterval]) -> _Status:
    enc = atom.poly.eval_box(box)
    lo, hi = enc.lo, enc.hi
    if atom.rel == "gt":
        if lo > 0:
            return _Status(_TRUE, False)
        if hi < 0:
            return _Status(_FALSE, False)
        return _Status(_IND, lo == 0 or hi == 0)
    if atom.rel == "ge":
        if lo >= 0:
            return _Status(_TRUE, False)
        if hi < 0:
            return _Status(_FALSE, False)
        return _Status(_IND, hi == 0)
    # eq
    if lo > 0 or hi < 0:
        return _Status(_FALSE, False)
    if lo == 0 and hi == 0:
        return _Status(_TRUE, False)
    return _Status(_IND, lo == 0 or hi == 0)


def _interval_status(phi: Formula, box: Mapping[str, RatInterval]) -> _Status:
    if isinstance(phi, Atom):
        return _atom_status(phi, box)
    if isinstance(phi, Not):
        s = _interval_status(phi.arg, box)
        tv = _IND if s.tv is _IND else (1 - s.tv)
        return _Status(tv, s.tangential)
    if isinstance(phi, (And, Or)):
        want_all = isinstance(phi, And)
        vals = [_interval_status(a, box) for a in phi.args]
        tangential = any(v.tangential for v in vals)
        tvs = [v.tv for v in vals]
        if want_all:
            if any(t is _FALSE for t in tvs):
                return _Status(_FALSE, tangential)
            if all(t is _TRUE for t in tvs):
                return _Status(_TRUE, tangential)
        else:
            if any(t is _TRUE for t in tvs):
                return _Status(_TRUE, tangential)
            if all(t is _FALSE for t in tvs):
                return _Status(_FALSE, tangential)
        return _Status(_IND, tangential)
    if isinstance(phi, Quant):
        raise ValueError("box proving requires a quantifier-free formula")
    raise TypeError(f"not a formula node: {phi!r}")


def _candidates(box: dict[str, RatInterval], names: list[str]):
    mid = {v: box[v].mid() for v in names}
    pts = [mid]
    if len(names) <= 4:
        corners = [{}]
        for v in names:
            nxt = []
            for c in corners:
                lo = dict(c)
                lo[v] = box[v].lo
                nxt.append(lo)
                if box[v].hi != box[v].lo:
                    hi = dict(c)
                    hi[v] = box[v].hi
                    nxt.append(hi)
            corners = nxt
        pts.extend(corners)
    key = lambda p: tuple(p[v] for v in names)
    uniq = {key(p): p for p in pts}
    return [uniq[k] for k in sorted(uniq)]


def decide_forall_box(phi: Formula, bounds: Mapping[str, tuple],
                      depth_cap: int = 12) -> ThreeValued:
    """Does ``phi`` hold at every point of the box?  Sound in both directions."""
    if not phi.is_quantifier_free():
        raise ValueError("box proving requires a quantifier-free formula")
    names = sorted(bounds)
    free = phi.variables()
    missing = free - set(names)
    if missing:
        from ..errors import UnboundVariable

        raise UnboundVariable(f"unbounded free variables: {sorted(missing)}")
    box = {v: RatInterval(Fraction(bounds[v][0]), Fraction(bounds[v][1]))
           for v in names}
    for v in names:
        if box[v].lo > box[v].hi:
            raise ValueError(f"empty interval for {v}")

    def explore(b: dict[str, RatInterval], depth_left: int):
        """-> ("true", None) | ("false", witness) | ("unknown", tangential)."""
        st = _interval_status(phi, b)
        if st.tv is _TRUE:
            return ("true", None)
        # exact candidate sampling covers the interval-refuted case too: a
        # box on which phi is false everywhere falsifies at its midpoint
        for pt in _candidates(b, names):
            if not eval_formula(phi, pt):
                return ("false", pt)
        if depth_left == 0:
            return ("unknown", st.tangential)
        widths = [(b[v].width(), i) for i, v in enumerate(names)]
        wmax = max(w for w, _ in widths)
        split = min(i for w, i in widths if w == wmax)
        sv = names[split]
        mid = b[sv].mid()
        tangential = False
        all_true = True
        for half in (RatInterval(b[sv].lo, mid), RatInterval(mid, b[sv].hi)):
            child = dict(b)
            child[sv] = half
            verdict, extra = explore(child, depth_left - 1)
            if verdict == "false":
                return (verdict, extra)
            if verdict == "unknown":
                all_true = False
                tangential = tangential or extra
        if all_true:
            return ("true", None)
        return ("unknown", tangential)

    tangential_last = False
    for cap in range(depth_cap + 1):
        verdict, extra = explore(box, cap)
        if verdict == "true":
            return ThreeValued.true()
        if verdict == "false":
            return ThreeValued.false(extra)
        tangential_last = extra
    return ThreeValued.unknown(
        "tangential-suspected" if tangential_last else "depth-exhausted")
