"""Decision procedure for eventual error-set avoidance.

Given the system, its initial state and a quantifier-free error formula over
the state variables, decide whether some tail of the orbit's closure can be
separated from the error set by a definable invariant:

* a "not exists" verdict comes with a re-verifiable witness along the
  distinguished all-ones phase direction, which every candidate invariant
  must approach arbitrarily closely;
* an "exists" verdict carries a widened-cone certificate plus a certified
  integer start time obtained by interval-checking the bounded orbit prefix;
* the built-in engine returns "unknown" (never a guess) when strict interval
  reasoning cannot separate the sets, which is exactly the tangential-contact
  regime.

The optional backend mode routes the quantifier block to an external
elimination tool and decides the resulting atoms by exact asymptotics; with
no quantifiers to eliminate the backend is never consulted and the path is
fully exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..asymptotics import (
    LogPoly,
    PowerLogSymbol,
    SymbolTable,
    asymptotic_sign,
    collect,
    sign_threshold,
)
from ..errors import NoCertificate
from ..exactnum import DEFAULT_DEGREE_CAP
from ..intervals import RatInterval, enclose_cos, enclose_exp, enclose_log, enclose_sin
from ..semialg import (
    And,
    Atom,
    Formula,
    Not,
    Or,
    Poly,
    decide_forall_box,
    dnf_atoms,
    eval_formula,
    external_qe,
    substitute,
)
from .conespec import (
    LOG_VAR,
    THETA_VAR,
    ConeSpec,
    GradedSum,
    build_cone_spec,
    phase_var_names,
    validate_error_formula,
)
from .fatcone import FatConeCertificate, synthesize_fat_cone
from .tail import (
    FieldGroup,
    all_ones_assignment,
    constant_value,
    eventual_sign,
    field_enclosure_at,
    field_sign_threshold,
    specialized_groups,
)

_PRECISIONS = (96, 192, 384)


@dataclass(frozen=True)
class DecideConfig:
    """Caps and mode selection for one decision run."""

    mode: str = "auto"                       # auto | builtin | backend
    backend_cmd: Optional[tuple[str, ...]] = None
    degree_cap: int = DEFAULT_DEGREE_CAP
    prec_bits: int = 96
    max_phase_boxes: int = 4096
    min_phase_width: Fraction = Fraction(1, 64)
    slice_depth: int = 12
    max_slices: int = 400


@dataclass(frozen=True)
class NotExistsWitness:
    """Evidence that every eventual invariant meets the error set.

    kind "point": the distinguished phase direction collapses to the exact
    rational state, which satisfies the error formula; that state is a limit
    point of every orbit tail.  kind "tail": along the distinguished
    direction the error disjunct holds for every scale >= s_star, certified
    and re-checkable at s_star, 2 s_star and 4 s_star.
    """

    kind: str                                 # "point" | "tail"
    disjunct: int                             # witnessed error-set disjunct
    torus_point: tuple[Fraction, ...]         # flattened phase assignment
    state: Optional[tuple[Fraction, ...]] = None
    s_star: Optional[Fraction] = None


@dataclass(frozen=True)
class DecisionOutcome:
    kind: str                                 # exists | not_exists | unknown
    t0: Optional[Fraction] = None
    cert: Optional[FatConeCertificate] = None
    witness: Optional[NotExistsWitness] = None
    reason: str = ""


def decide_eventual(A, x0, Y: Formula,
                    config: Optional[DecideConfig] = None) -> DecisionOutcome:
    cfg = config or DecideConfig()
    cone = build_cone_spec(A, x0, degree_cap=cfg.degree_cap)
    validate_error_formula(Y, cone.dimension)
    mode = cfg.mode
    if mode == "auto":
        mode = "backend" if cfg.backend_cmd else "builtin"
    if mode == "backend":
        return _decide_backend(cone, Y, cfg)
    if mode != "builtin":
        raise ValueError(f"unknown decision mode {cfg.mode!r}")
    return _decide_builtin(cone, Y, cfg)


# ---------------------------------------------------------------------------
# the distinguished-direction refutation probe


def _constant_coordinate(groups: tuple[FieldGroup, ...]) -> Optional[Fraction]:
    """Exact rational value when the specialized coordinate is scale-free."""
    if not groups:
        return Fraction(0)
    cv = constant_value(groups)
    if cv is None or not cv.is_rational():
        return None
    return cv.rational_value()


def _flat_all_ones(cone: ConeSpec) -> tuple[Fraction, ...]:
    out = []
    for _ in range(cone.n_phase_classes):
        out.extend((Fraction(1), Fraction(0)))
    return tuple(out)


def _atom_eventually_holds(groups: tuple[FieldGroup, ...], rel: str):
    """(holds, threshold or None) along the distinguished direction."""
    if not groups:
        return (rel in ("ge", "eq")), None
    cv = constant_value(groups)
    if cv is not None:
        sg = cv.sign()
        if rel == "gt":
            return sg > 0, None
        if rel == "ge":
            return sg >= 0, None
        return sg == 0, None
    sg = eventual_sign(groups)
    if rel == "eq" or sg < 0:
        return False, None
    return True, field_sign_threshold(groups)


def _all_ones_probe(cone: ConeSpec, Y: Formula) -> Optional[NotExistsWitness]:
    """A witness that the error set captures the distinguished direction of
    every orbit-tail closure, or None."""
    assign = all_ones_assignment(cone)
    compose_cache: dict[Poly, tuple[FieldGroup, ...]] = {}

    def groups_of(p: Poly) -> tuple[FieldGroup, ...]:
        got = compose_cache.get(p)
        if got is None:
            got = specialized_groups(cone, cone.compose(p), assign)
            compose_cache[p] = got
        return got

    state_consts = [
        _constant_coordinate(specialized_groups(cone, gs, assign))
        for gs in cone.state
    ]
    point_state = (tuple(state_consts)
                   if all(v is not None for v in state_consts) else None)

    for di, conj in enumerate(dnf_atoms(Y)):
        thresholds: list[Fraction] = []
        ok = True
        for atom in conj:
            holds, thr = _atom_eventually_holds(groups_of(atom.poly), atom.rel)
            if not holds:
                ok = False
                break
            if thr is not None:
                thresholds.append(thr)
        if not ok:
            continue
        if not thresholds and point_state is not None:
            witness = NotExistsWitness(kind="point", disjunct=di,
                                       torus_point=_flat_all_ones(cone),
                                       state=point_state)
        else:
            s_star = max(thresholds, default=Fraction(2))
            witness = NotExistsWitness(kind="tail", disjunct=di,
                                       torus_point=_flat_all_ones(cone),
                                       s_star=s_star)
        if _verify_witness_on_cone(cone, Y, witness):
            return witness
    return None


# ---------------------------------------------------------------------------
# witness re-verification


def _verify_witness_on_cone(cone: ConeSpec, Y: Formula,
                            witness: NotExistsWitness) -> bool:
    try:
        disjuncts = dnf_atoms(Y)
        if not (0 <= witness.disjunct < len(disjuncts)):
            return False
        if witness.torus_point != _flat_all_ones(cone):
            return False
        assign = all_ones_assignment(cone)
        conj = disjuncts[witness.disjunct]
        if witness.kind == "point":
            if witness.state is None or len(witness.state) != cone.dimension:
                return False
            for got, gs in zip(witness.state, cone.state):
                cv = _constant_coordinate(specialized_groups(cone, gs, assign))
                if cv is None or cv != got:
                    return False
            return eval_formula(Y, {f"x{i + 1}": v
                                    for i, v in enumerate(witness.state)})
        if witness.kind != "tail":
            return False
        if witness.s_star is None or witness.s_star <= 1:
            return False
        for mult in (1, 2, 4):
            s = witness.s_star * mult
            for atom in conj:
                groups = specialized_groups(cone, cone.compose(atom.poly),
                                            assign)
                if not _atom_holds_at_scale(groups, atom.rel, s):
                    return False
        return True
    except Exception:
        return False


def _atom_holds_at_scale(groups: tuple[FieldGroup, ...], rel: str,
                         s: Fraction) -> bool:
    if not groups:
        return rel in ("ge", "eq")
    cv = constant_value(groups)
    if cv is not None:
        sg = cv.sign()
        return sg > 0 if rel == "gt" else sg >= 0 if rel == "ge" else sg == 0
    if rel == "eq":
        return False
    for prec in _PRECISIONS:
        iv = field_enclosure_at(groups, s, prec)
        if iv.lo > 0:
            return True
        if iv.hi < 0:
            return False
    return False


def verify_witness(A, x0, Y: Formula, witness: NotExistsWitness) -> bool:
    """Independent re-verification of a refutation witness."""
    try:
        cone = build_cone_spec(A, x0)
        validate_error_formula(Y, cone.dimension)
    except Exception:
        return False
    return _verify_witness_on_cone(cone, Y, witness)


# ---------------------------------------------------------------------------
# built-in engine


def _decide_builtin(cone: ConeSpec, Y: Formula,
                    cfg: DecideConfig) -> DecisionOutcome:
    witness = _all_ones_probe(cone, Y)
    if witness is not None:
        return DecisionOutcome(
            kind="not_exists", witness=witness,
            reason="the error set captures the distinguished phase direction "
                   "of every orbit-tail closure")
    try:
        cert = synthesize_fat_cone(cone, Y, Fraction(0),
                                   max_boxes=cfg.max_phase_boxes,
                                   min_width=cfg.min_phase_width)
    except NoCertificate as e:
        return DecisionOutcome(kind="unknown", reason=str(e))
    t0 = _compact_start(cone, Y, cert, cfg)
    return DecisionOutcome(kind="exists", t0=Fraction(t0), cert=cert)


def _render_class_scale_poly(cone: ConeSpec, gs: GradedSum) -> Poly:
    """State polynomial over per-rate-class scale symbols m1.. plus phases,
    the log symbol and the field generator."""
    total = Poly.zero()
    for vec, apoly in gs.parts:
        factor = apoly.to_poly(THETA_VAR)
        for c, n in enumerate(vec):
            if n:
                factor = factor * Poly.variable(f"m{c + 1}").power(n)
        total = total + factor
    return total


def _clamped(iv: RatInterval, lo: Fraction, hi: Fraction) -> RatInterval:
    return RatInterval(max(iv.lo, lo), min(iv.hi, hi))


def _compact_start(cone: ConeSpec, Y: Formula, cert: FatConeCertificate,
                   cfg: DecideConfig) -> int:
    """Smallest certified integer start time: 0 when interval slicing proves
    the whole bounded prefix avoids the error set, else the prefix horizon."""
    log_iv = enclose_log(RatInterval.point(cert.s1), cfg.prec_bits)
    horizon = max(0, math.ceil(log_iv.hi))
    if horizon == 0:
        return 0
    if horizon > cfg.max_slices:
        return horizon

    subs = {f"x{i + 1}": _render_class_scale_poly(cone, gs)
            for i, gs in enumerate(cone.state)}
    y_sub = substitute(Y, subs)
    used = y_sub.variables()

    side: list[Formula] = []
    active_classes: list[int] = []
    for g in range(cone.n_phase_classes):
        cn, sn = phase_var_names(g)
        if cn in used or sn in used:
            active_classes.append(g)
            pc, ps = Poly.variable(cn), Poly.variable(sn)
            side.append(Atom.make(pc * pc + ps * ps - Poly.constant(1), "eq"))
    phi: Formula = (Or((Not(And(tuple(side))), Not(y_sub)))
                    if side else Not(y_sub))

    width = Fraction(1, 2**48)
    theta_iv = None
    if THETA_VAR in used:
        theta = cone.embedding.field.theta
        theta.refine_below(width)
        theta_iv = theta.rat_interval()

    for i in range(horizon):
        t_slice = RatInterval(Fraction(i), Fraction(i + 1))
        bounds: dict[str, tuple[Fraction, Fraction]] = {}
        for c, rho in enumerate(cone.rate_values):
            name = f"m{c + 1}"
            if name not in used:
                continue
            rho.refine_below(width)
            miv = enclose_exp(rho.rat_interval() * t_slice, cfg.prec_bits)
            bounds[name] = (miv.lo, miv.hi)
        for g in active_classes:
            cn, sn = phase_var_names(g)
            omega = cone.phase_frequencies[g]
            omega.refine_below(width)
            ang = omega.rat_interval() * t_slice
            civ = _clamped(enclose_cos(ang, cfg.prec_bits),
                           Fraction(-1), Fraction(1))
            siv = _clamped(enclose_sin(ang, cfg.prec_bits),
                           Fraction(-1), Fraction(1))
            bounds[cn] = (civ.lo, civ.hi)
            bounds[sn] = (siv.lo, siv.hi)
        if LOG_VAR in used:
            bounds[LOG_VAR] = (t_slice.lo, t_slice.hi)
        if theta_iv is not None:
            bounds[THETA_VAR] = (theta_iv.lo, theta_iv.hi)
        verdict = decide_forall_box(phi, bounds, cfg.slice_depth)
        if verdict.value != "true":
            return horizon
    return 0


# ---------------------------------------------------------------------------
# backend engine


class _NotExactlyRational(Exception):
    pass


def _render_rational_scale_poly(cone: ConeSpec, gs: GradedSum) -> Poly:
    """Like the class-scale rendering but demands rational coefficients and
    no phase variables; raises _NotExactlyRational otherwise."""
    total = Poly.zero()
    phase_names = set(cone.phase_box_names())
    for vec, apoly in gs.parts:
        for mono, coeff in apoly.terms:
            if any(name in phase_names or name not in (LOG_VAR,)
                   for name, _ in mono):
                raise _NotExactlyRational
            if not coeff.is_rational():
                raise _NotExactlyRational
            part = Poly.constant(coeff.rational_value())
            for name, pw in mono:
                part = part * Poly.variable(name).power(pw)
            for c, n in enumerate(vec):
                if n:
                    part = part * Poly.variable(f"m{c + 1}").power(n)
            total = total + part
    return total


def _decide_backend(cone: ConeSpec, Y: Formula,
                    cfg: DecideConfig) -> DecisionOutcome:
    if not cfg.backend_cmd:
        raise ValueError("backend mode requires a backend command")
    try:
        subs = {f"x{i + 1}": _render_rational_scale_poly(cone, gs)
                for i, gs in enumerate(cone.state)}
        complement = Not(substitute(Y, subs))
    except _NotExactlyRational:
        return DecisionOutcome(
            kind="unknown",
            reason="backend mode needs the eliminated complement over scale "
                   "symbols with rational coefficients; this system's phases "
                   "or field generator were not eliminated")
    eliminated = external_qe(complement, cfg.backend_cmd)

    k = cone.n_rate_classes
    symbols = {}
    for c in range(k):
        unit = tuple(1 if j == c else 0 for j in range(k))
        symbols[f"m{c + 1}"] = PowerLogSymbol(unit, LogPoly.constant(Fraction(1)))
    symbols[LOG_VAR] = PowerLogSymbol((0,) * k, LogPoly.variable())
    table = SymbolTable(tuple(cone.rate_values), symbols)

    for conj in dnf_atoms(eliminated):
        ok = True
        s_max = Fraction(2)
        for atom in conj:
            res = collect(atom.poly, table, cone.degree_cap)
            sm = res.explog_sum
            if sm.is_empty:
                if atom.rel == "gt":
                    ok = False
                    break
                continue
            sg = asymptotic_sign(sm)
            if atom.rel == "eq" or sg < 0:
                ok = False
                break
            s_max = max(s_max, sign_threshold(sm))
        if not ok:
            continue
        log_iv = enclose_log(RatInterval.point(s_max), cfg.prec_bits)
        t0 = Fraction(max(0, math.ceil(log_iv.hi)))
        try:
            cert = synthesize_fat_cone(cone, Y, t0,
                                       max_boxes=cfg.max_phase_boxes,
                                       min_width=cfg.min_phase_width)
        except NoCertificate:
            cert = None
        return DecisionOutcome(kind="exists", t0=t0, cert=cert)

    witness = _all_ones_probe(cone, Y)
    if witness is not None:
        return DecisionOutcome(
            kind="not_exists", witness=witness,
            reason="every eliminated-complement branch eventually fails; the "
                   "orbit tail lies inside the error set")
    return DecisionOutcome(
        kind="unknown",
        reason="the eliminated complement eventually fails but no "
               "re-verifiable witness could be assembled")
