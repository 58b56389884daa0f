"""Widened-cone certificate synthesis.

The certificate replaces each exact growth rate by a small rational box, the
exact log factor by a free symbol bounded between delta and s^eps, and keeps
the multiplicative relations among the rates and the additive relations among
the frequencies as polynomial constraints.  Avoidance of the error set is
certified over a subdivision of the phase cube; every analytic constant is
re-verified exactly before the certificate is returned.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ..asymptotics import GapData, gap_data, positive_lower_bound
from ..errors import NoCertificate
from ..exactnum import RealAlgebraic, alg_sqrt
from ..intervals import RatInterval
from ..semialg import And, Atom, Formula, Poly, Quant, dnf_atoms, eval_formula
from ..spectral import RelationLattice, additive_relations
from .conespec import (
    LOG_VAR,
    SCALE_VAR,
    THETA_VAR,
    ConeSpec,
    GradedSum,
    block_weight_name,
    phase_var_names,
    validate_error_formula,
)
from .tail import BoxGroup, box_groups, certify_positive_fat

_MAX_CLEARING_EXP = 16      # largest power-of-two exponent in clearing atoms
_THETA_WIDTH = Fraction(1, 2**24)


@dataclass(frozen=True)
class FatConeCertificate:
    """Semi-algebraic invariant-set certificate for one system and error set.

    The formula binds the scale, the per-block weights (with auxiliary
    corner variables for irrational rates), the phase pairs, the log symbol
    and the field generator; only the state variables are free.  Constants:
    eps bounds the log symbol by s^eps, delta bounds it from below, s0 is the
    certified avoidance threshold, s1 >= s0 the certified invariance
    threshold used in the formula, ell/u the per-block rate boxes.
    """

    eps: Fraction
    delta: Fraction
    s0: Fraction
    s1: Fraction
    ell: tuple[Fraction, ...]
    u: tuple[Fraction, ...]
    rho_relations: RelationLattice
    formula: Formula
    n_phase_boxes: int


# ---------------------------------------------------------------------------
# widening constants


def _dyadic_floor(x: Fraction) -> Fraction:
    """Largest power of two <= x, for x > 0."""
    if x <= 0:
        raise ValueError("dyadic floor needs a positive input")
    j = x.numerator.bit_length() - x.denominator.bit_length()
    cand = Fraction(2) ** j
    if cand > x:
        cand /= 2
    while cand * 2 <= x:
        cand *= 2
    return cand


def _ceil_log2(x: Fraction) -> int:
    """Smallest integer L with 2^L >= x, for x > 0."""
    if x <= 0:
        raise ValueError("log of a nonpositive value")
    L = x.numerator.bit_length() - x.denominator.bit_length() - 1
    while Fraction(2) ** L < x:
        L += 1
    return L


def fat_cone_rates(gap: GapData, k: int) -> tuple[Fraction, Fraction]:
    """(eps, box width cap) from exact gap statistics over k rate classes.

    eps is a dyadic rational with mu - 3*B*eps >= 0 and mu - 2*B*eps > 0
    verified exactly (B = max log degree); the width cap w satisfies
    mu - 2*w*M*sqrt(k) >= 0 exactly.  Without a second exponent value there
    is no constraint and defaults are returned.
    """
    if gap.no_pairs:
        return Fraction(1, 2), Fraction(1, 4)
    mu = gap.min_exponent_gap
    M = gap.max_vector_distance
    if M.sign() == 0:
        return Fraction(1, 2), Fraction(1, 4)
    b = gap.max_log_degree
    plb = positive_lower_bound(mu)
    if b == 0:
        eps = Fraction(1, 2)
    else:
        eps = min(_dyadic_floor(plb / (3 * b)), Fraction(1, 2))
        while True:
            ra = RealAlgebraic.from_rational
            if ((mu - ra(3 * b * eps)).sign() >= 0
                    and (mu - ra(2 * b * eps)).sign() > 0):
                break
            eps /= 2
    sqrt_k = alg_sqrt(k)
    sqrt_k.refine_below(Fraction(1, 2**16))
    M.refine_below(Fraction(1, 2**16))
    denom = 2 * M.rat_interval().hi * sqrt_k.rat_interval().hi
    width = _dyadic_floor(plb / denom)
    while True:
        lhs = RealAlgebraic.from_rational(2 * width) * M * sqrt_k
        if (mu - lhs).sign() >= 0:
            break
        width /= 2
    return eps, width


def invariance_threshold(eps: Fraction, delta: Fraction, s0: Fraction,
                         t0: Fraction) -> Fraction:
    """Power-of-two s1 >= s0 making the widened cone flow-invariant.

    Re-derivable conditions (certified by elementary bounds exp(v) >= v^2/2
    and log 2 >= 1/2, all arithmetic exact):

    * xbar = 2^j with j a multiple of den(eps), j >= 1/eps and j >= 4/eps^2,
      so that y^eps >= max(log y, 2) for every y >= xbar;
    * s1^eps >= max(2, delta, (xbar-1)/(xbar^eps-1)), covering both the large
      and the small displacement cases of the invariance argument and keeping
      the log-symbol range nonempty;
    * s1 >= s0 and log s1 >= t0 (via log 2 >= 1/2: s1 = 2^h with h >= 2*t0).
    """
    if not (0 < eps <= Fraction(1, 2)):
        raise ValueError("eps must lie in (0, 1/2]")
    den = eps.denominator
    if den & (den - 1) or eps.numerator != 1:
        raise ValueError("eps must be a power of two")
    need = max(math.ceil(1 / eps), math.ceil(4 / eps**2))
    j_b = den * math.ceil(Fraction(need, den))
    xbar = Fraction(2) ** j_b
    c_small = (xbar - 1) / (Fraction(2) ** int(j_b * eps) - 1)
    target = max(Fraction(2), c_small, delta)
    big_l = _ceil_log2(target)
    log2_s0 = _ceil_log2(s0)
    hmin = max(Fraction(big_l) / eps, Fraction(log2_s0), 2 * t0)
    h = den * math.ceil(hmin / den)
    return Fraction(2) ** h


# ---------------------------------------------------------------------------
# per-disjunct refutation candidates


@dataclass(frozen=True)
class _Disjunct:
    trivial: bool                        # never satisfiable on the cone
    candidates: tuple[GradedSum, ...]    # strict-positivity targets


def _refutation_candidates(cone: ConeSpec, Y: Formula) -> tuple[_Disjunct, ...]:
    compose_cache: dict[Poly, GradedSum] = {}

    def composed(p: Poly) -> GradedSum:
        got = compose_cache.get(p)
        if got is None:
            got = cone.compose(p)
            compose_cache[p] = got
        return got

    out = []
    for conj in dnf_atoms(Y):
        trivial = False
        cands: list[GradedSum] = []
        for atom in conj:
            gs = composed(atom.poly)
            if not gs.parts:
                # the polynomial is identically zero along the cone
                if atom.rel == "gt":
                    trivial = True
                    break
                continue  # ge / eq hold identically: not refutable here
            if atom.rel == "eq":
                cands.append(gs)
                cands.append(gs.scale(Fraction(-1)))
            else:
                cands.append(gs.scale(Fraction(-1)))
        if trivial:
            out.append(_Disjunct(True, ()))
            continue
        if not cands and conj:
            raise NoCertificate(
                "an error-set disjunct holds identically along the orbit "
                "cone; no invariant can avoid it")
        if not conj:
            raise NoCertificate(
                "the error set contains an identically true branch")
        out.append(_Disjunct(False, tuple(cands)))
    return tuple(out)


# ---------------------------------------------------------------------------
# phase-cube avoidance driver


def _box_feasible(cone: ConeSpec, box: dict[str, RatInterval]) -> bool:
    """Can the box contain a point of the relation torus?"""
    one = Fraction(1)
    for g in range(cone.n_phase_classes):
        cn, sn = phase_var_names(g)
        circ = box[cn] * box[cn] + box[sn] * box[sn]
        if not (circ.lo <= one <= circ.hi):
            return False
    for z in cone.omega_relations.basis:
        re = RatInterval.point(1)
        im = RatInterval.point(0)
        for g, zg in enumerate(z):
            if zg == 0:
                continue
            cn, sn = phase_var_names(g)
            civ, siv = box[cn], box[sn]
            if zg < 0:
                siv = RatInterval(-siv.hi, -siv.lo)
                zg = -zg
            for _ in range(zg):
                re, im = re * civ - im * siv, re * siv + im * civ
        if not (re.lo <= 1 <= re.hi and im.lo <= 0 <= im.hi):
            return False
    return True


@dataclass(frozen=True)
class _AvoidanceStats:
    s0: Fraction
    max_radius: Fraction
    n_boxes: int


def _certify_avoidance(cone: ConeSpec, disjuncts: Sequence[_Disjunct],
                       class_lo: Sequence[Fraction],
                       class_hi: Sequence[Fraction],
                       eps: Fraction,
                       max_boxes: int,
                       min_width: Fraction) -> _AvoidanceStats:
    names = cone.phase_box_names()
    active = [d for d in disjuncts if not d.trivial]
    if not active:
        return _AvoidanceStats(Fraction(2), Fraction(1), 0)
    queue = [{n: RatInterval(Fraction(-1), Fraction(1)) for n in names}]
    s_star = Fraction(2)
    radius = Fraction(1)
    processed = 0
    while queue:
        box = queue.pop()
        processed += 1
        if processed > max_boxes:
            raise NoCertificate(
                "phase-cube subdivision budget exhausted; the error set may "
                "make tangential contact with the orbit cone")
        if names and not _box_feasible(cone, box):
            continue
        certified = True
        for d in active:
            got = None
            for gs in d.candidates:
                out = certify_positive_fat(box_groups(cone, gs, box),
                                           class_lo, class_hi, eps)
                if out.status == "ok":
                    got = out.cert
                    break
            if got is None:
                certified = False
                break
            s_star = max(s_star, got.s_star)
            radius = max(radius, got.head_radius)
        if certified:
            continue
        if not names:
            raise NoCertificate(
                "no single error-set atom is uniformly refutable along the "
                "cone; the contact may be tangential")
        widest = max(box[n].width() for n in names)
        if widest <= min_width:
            raise NoCertificate(
                f"phase box at width {widest} still undecided; the error set "
                "may make tangential contact with the orbit cone")
        split = next(n for n in names if box[n].width() == widest)
        mid = box[split].mid()
        for half in (RatInterval(box[split].lo, mid),
                     RatInterval(mid, box[split].hi)):
            child = dict(box)
            child[split] = half
            queue.append(child)
    return _AvoidanceStats(s_star, radius, processed)


# ---------------------------------------------------------------------------
# formula emission


def _power_clearing_atoms(var: Poly, exponent: Fraction,
                          s: Poly) -> list[Atom]:
    """var > 0 and var = s^exponent, cleared to polynomial atoms."""
    q = exponent.denominator
    p = exponent.numerator
    atoms = [Atom.make(var, "gt")]
    if p >= 0:
        atoms.append(Atom.make(var.power(q) - s.power(p), "eq"))
    else:
        atoms.append(Atom.make(var.power(q) * s.power(-p) - Poly.constant(1),
                               "eq"))
    return atoms


def _relation_product_atom(weights: Sequence[Poly],
                           z: Sequence[int]) -> Atom:
    lhs = Poly.constant(1)
    rhs = Poly.constant(1)
    for w, zi in zip(weights, z):
        if zi > 0:
            lhs = lhs * w.power(zi)
        elif zi < 0:
            rhs = rhs * w.power(-zi)
    return Atom.make(lhs - rhs, "eq")


def _phase_relation_atoms(cone: ConeSpec) -> list[Atom]:
    atoms = []
    for z in cone.omega_relations.basis:
        re = Poly.constant(1)
        im = Poly.zero()
        for g, zg in enumerate(z):
            if zg == 0:
                continue
            cn, sn = phase_var_names(g)
            pc = Poly.variable(cn)
            ps = Poly.variable(sn)
            if zg < 0:
                ps = -ps
                zg = -zg
            for _ in range(zg):
                re, im = re * pc - im * ps, re * ps + im * pc
        atoms.append(Atom.make(re - Poly.constant(1), "eq"))
        atoms.append(Atom.make(im, "eq"))
    return atoms


def _render_state_poly(cone: ConeSpec, gs: GradedSum,
                       class_weight: Sequence[Poly]) -> Poly:
    total = Poly.zero()
    for vec, apoly in gs.parts:
        factor = apoly.to_poly(THETA_VAR)
        for c, n in enumerate(vec):
            if n:
                factor = factor * class_weight[c].power(n)
        total = total + factor
    return total


def _emit_formula(cone: ConeSpec, s1: Fraction, delta: Fraction,
                  eps: Fraction,
                  boxes: Sequence[tuple[Optional[Fraction], Fraction, Fraction]],
                  rho_relations: RelationLattice,
                  uses_log: bool) -> Quant:
    s = Poly.variable(SCALE_VAR)
    atoms: list[Atom] = [Atom.make(s - Poly.constant(s1), "ge")]
    bound: list[str] = [SCALE_VAR]

    weights = []
    for i, (exact, lo, hi) in enumerate(boxes):
        wname = block_weight_name(i)
        w = Poly.variable(wname)
        weights.append(w)
        bound.append(wname)
        if exact is not None:
            atoms.extend(_power_clearing_atoms(w, exact, s))
        else:
            atoms.append(Atom.make(w, "gt"))
            wlo = Poly.variable(f"wlo{i + 1}")
            whi = Poly.variable(f"whi{i + 1}")
            bound.extend((f"wlo{i + 1}", f"whi{i + 1}"))
            atoms.extend(_power_clearing_atoms(wlo, lo, s))
            atoms.extend(_power_clearing_atoms(whi, hi, s))
            atoms.append(Atom.make(w - wlo, "ge"))
            atoms.append(Atom.make(whi - w, "ge"))
    for z in rho_relations.basis:
        atoms.append(_relation_product_atom(weights, z))

    for g in range(cone.n_phase_classes):
        cn, sn = phase_var_names(g)
        bound.extend((cn, sn))
        pc = Poly.variable(cn)
        ps = Poly.variable(sn)
        atoms.append(Atom.make(pc * pc + ps * ps - Poly.constant(1), "eq"))
    atoms.extend(_phase_relation_atoms(cone))

    if uses_log:
        r = Poly.variable(LOG_VAR)
        bound.append(LOG_VAR)
        atoms.append(Atom.make(r - Poly.constant(delta), "ge"))
        # r <= s^eps with eps = 1/2^m: r^(2^m) <= s, valid since r, s > 0
        atoms.append(Atom.make(s - r.power(eps.denominator), "ge"))

    if not cone.embedding.is_rational:
        theta = cone.embedding.field.theta
        theta.refine_below(_THETA_WIDTH)
        iso = theta.rat_interval()
        th = Poly.variable(THETA_VAR)
        bound.append(THETA_VAR)
        minpoly = Poly.zero()
        for j, cj in enumerate(theta.minimal_polynomial()):
            if cj:
                minpoly = minpoly + Poly.constant(cj) * th.power(j)
        atoms.append(Atom.make(minpoly, "eq"))
        atoms.append(Atom.make(th - Poly.constant(iso.lo), "ge"))
        atoms.append(Atom.make(Poly.constant(iso.hi) - th, "ge"))

    first_block = []
    for c in range(cone.n_rate_classes):
        idx = next(i for i, b in enumerate(cone.spectral) if b.rate_class == c)
        first_block.append(weights[idx])
    for i, gs in enumerate(cone.state):
        xi = Poly.variable(f"x{i + 1}")
        atoms.append(Atom.make(xi - _render_state_poly(cone, gs, first_block),
                               "eq"))

    bindings = tuple((v, None, None) for v in bound)
    return Quant("exists", bindings, And(tuple(atoms)))


# ---------------------------------------------------------------------------
# synthesis entry point


def _block_boxes(cone: ConeSpec, width_cap: Fraction):
    """Per spectral block: (exact rational rate or None, lower, upper)."""
    e = 2
    while Fraction(4, 2**e) > width_cap:
        e += 1
        if e > _MAX_CLEARING_EXP:
            raise NoCertificate(
                "the rate gap demands box corners with clearing exponent "
                f"beyond 2^{_MAX_CLEARING_EXP}; formula emission aborted")
    den = 2**e
    out = []
    for b in cone.spectral:
        if b.rho.is_rational_point():
            v = b.rho.rational_value()
            out.append((v, v, v))
        else:
            b.rho.refine_below(Fraction(1, 2**e * 4))
            iv = b.rho.rat_interval()
            lo = Fraction(math.floor(iv.lo * den), den)
            hi = Fraction(math.ceil(iv.hi * den), den)
            out.append((None, lo, hi))
    return out


def _all_ones_rational_point(cone: ConeSpec, s: Fraction,
                             boxes) -> Optional[dict[str, Fraction]]:
    """Exact assignment for the formula body at the distinguished phase
    direction, available when every rate is an integer and no log factor or
    field generator appears."""
    if any(gs.max_log_degree() > 0 for gs in cone.state):
        return None
    if not cone.embedding.is_rational:
        return None
    assign: dict[str, Fraction] = {SCALE_VAR: s}
    for i, (exact, _lo, _hi) in enumerate(boxes):
        if exact is None or exact.denominator != 1:
            return None
        assign[block_weight_name(i)] = s ** exact
    for g in range(cone.n_phase_classes):
        cn, sn = phase_var_names(g)
        assign[cn] = Fraction(1)
        assign[sn] = Fraction(0)
    for i, gs in enumerate(cone.state):
        total = Fraction(0)
        for vec, apoly in gs.parts:
            spec = apoly.specialize({n: assign[n]
                                     for n in apoly.variables()
                                     if n != LOG_VAR})
            if spec.is_zero():
                continue
            coeff = spec.eval_exact({})
            if not coeff.is_rational():
                return None
            val = coeff.rational_value()
            for c, n in enumerate(vec):
                if n:
                    val *= assign[block_weight_name(
                        next(j for j, blk in enumerate(cone.spectral)
                             if blk.rate_class == c))] ** n
            total += val
        assign[f"x{i + 1}"] = total
    return assign


def synthesize_fat_cone(cone: ConeSpec, Y: Formula,
                        t0=Fraction(0), *,
                        max_boxes: int = 4096,
                        min_width: Fraction = Fraction(1, 64)) -> FatConeCertificate:
    """Synthesize and exactly re-verify a widened-cone certificate whose
    semi-algebraic set contains the orbit tail and avoids Y."""
    t0 = Fraction(t0)
    validate_error_formula(Y, cone.dimension)
    disjuncts = _refutation_candidates(cone, Y)

    vectors = {(0,) * cone.n_rate_classes}
    b_max = 0
    for d in disjuncts:
        for gs in d.candidates:
            vectors.update(gs.formal)
            b_max = max(b_max, gs.max_log_degree())
    gd = gap_data((), sorted(vectors), cone.rate_values, cone.degree_cap)
    gd = dataclasses.replace(gd, max_log_degree=b_max)
    eps, width_cap = fat_cone_rates(gd, max(cone.n_rate_classes, 1))

    boxes = _block_boxes(cone, width_cap)
    class_lo = []
    class_hi = []
    for c in range(cone.n_rate_classes):
        idx = next(i for i, b in enumerate(cone.spectral)
                   if b.rate_class == c)
        class_lo.append(boxes[idx][1])
        class_hi.append(boxes[idx][2])

    stats = _certify_avoidance(cone, disjuncts, class_lo, class_hi, eps,
                               max_boxes, min_width)
    s0 = stats.s0
    delta = Fraction(1)
    while delta < stats.max_radius:
        delta *= 2

    s1 = invariance_threshold(eps, delta, s0, t0)
    rho_relations = additive_relations([b.rho for b in cone.spectral],
                                       cone.degree_cap)
    uses_log = (max((gs.max_log_degree() for gs in cone.state), default=0) > 0)
    formula = _emit_formula(cone, s1, delta, eps, boxes, rho_relations,
                            uses_log)

    cert = FatConeCertificate(
        eps=eps, delta=delta, s0=s0, s1=s1,
        ell=tuple(b[1] for b in boxes),
        u=tuple(b[2] for b in boxes),
        rho_relations=rho_relations,
        formula=formula,
        n_phase_boxes=max(stats.n_boxes, 1))
    _reverify(cone, cert, Y, gd, boxes, t0)
    return cert


def _reverify(cone: ConeSpec, cert: FatConeCertificate, Y: Formula,
              gd: GapData, boxes, t0: Fraction) -> None:
    """Exact re-check of every certificate constant; raises NoCertificate on
    any failure (which would indicate an internal bug, never a caller error)."""
    ra = RealAlgebraic.from_rational
    for blk, lo, hi in zip(cone.spectral, cert.ell, cert.u):
        if (blk.rho - ra(lo)).sign() < 0 or (ra(hi) - blk.rho).sign() < 0:
            raise NoCertificate("re-verification failed: rate outside its box")
    if not gd.no_pairs:
        mu = gd.min_exponent_gap
        b = gd.max_log_degree
        if b > 0 and (mu - ra(3 * b * cert.eps)).sign() < 0:
            raise NoCertificate("re-verification failed: eps too large")
        k = max(cone.n_rate_classes, 1)
        for lo, hi in zip(cert.ell, cert.u):
            lhs = ra(2 * (hi - lo)) * gd.max_vector_distance * alg_sqrt(k)
            if (mu - lhs).sign() < 0:
                raise NoCertificate("re-verification failed: box too wide")
    if cert.s1 < cert.s0:
        raise NoCertificate("re-verification failed: s1 below s0")
    if cert.s1 != invariance_threshold(cert.eps, cert.delta, cert.s0, t0):
        raise NoCertificate(
            "re-verification failed: s1 does not match its re-derivation")
    point = _all_ones_rational_point(cone, 2 * cert.s1, boxes)
    if point is not None:
        body = cert.formula.body
        need = {v for v in body.variables() if v not in point}
        if not need:
            if not eval_formula(body, point):
                raise NoCertificate(
                    "re-verification failed: distinguished orbit direction "
                    "is not a member of the emitted set")
            state = {f"x{i + 1}": point[f"x{i + 1}"]
                     for i in range(cone.dimension)}
            if eval_formula(Y, state):
                raise NoCertificate(
                    "re-verification failed: a member of the emitted set "
                    "satisfies the error formula")
