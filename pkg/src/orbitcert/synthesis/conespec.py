"""Orbit-cone parameterization of a continuous linear system.

The orbit exp(At) x0 is expanded exactly into

    x_i(t) = sum over blocks  e^(rho t) * [phase combination] * G(t)

with G a polynomial whose coefficients live in the eigenvalue group's real
number field.  Conjugate block pairs are combined into the real form
2*(cos(w t) Re G - sin(w t) Im G).  Substituting one scale symbol per
distinct growth rate (rate class), one phase pair per distinct frequency
(phase class) and a log symbol r for t yields the cone parameterization: a
graded sum of polynomials indexed by integer exponent vectors over the rate
classes.  Everything downstream (decision, tail analysis, certificate
synthesis, sampling) consumes this structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from ..exactnum import DEFAULT_DEGREE_CAP, NumberField, RealAlgebraic, common_field
from ..exactnum.numberfield import FieldElement
from ..intervals import RatInterval, enclose_cos, enclose_exp, enclose_sin
from ..semialg import Formula, Poly
from ..spectral import (
    JordanDecomposition,
    RelationLattice,
    additive_relations,
    jordan_decompose,
)
from .fieldpoly import AlgPoly, FieldEmbedding

LOG_VAR = "r"
SCALE_VAR = "s"
THETA_VAR = "th"
SIGMA_VAR = "sig"


def phase_var_names(class_index: int) -> tuple[str, str]:
    """(cosine, sine) variable names for one phase class, 0-based index."""
    return (f"c{class_index + 1}", f"s{class_index + 1}")


def block_weight_name(block_index: int) -> str:
    """Scale-weight variable for one spectral block, 0-based index."""
    return f"w{block_index + 1}"


def reserved_variable_names(n_blocks: int, n_phase: int,
                            n_rate: int) -> set[str]:
    names = {LOG_VAR, SCALE_VAR, THETA_VAR, SIGMA_VAR, "weps"}
    for i in range(n_blocks):
        w = block_weight_name(i)
        names.update((w, f"wlo{i + 1}", f"whi{i + 1}"))
    for g in range(n_phase):
        names.update(phase_var_names(g))
    for c in range(n_rate):
        names.add(f"m{c + 1}")
    return names


@dataclass(frozen=True)
class GradedSum:
    """Finite sum over rate-class exponent vectors n of s^(rho . n) * p_n,
    where p_n is a polynomial in phase variables and the log symbol.

    parts holds only nonzero polynomials; formal additionally remembers every
    vector produced during expansion, including those whose coefficients
    cancelled, because a perturbed rate box can split or revive them.
    """

    length: int
    parts: tuple[tuple[tuple[int, ...], AlgPoly], ...]
    formal: frozenset

    @staticmethod
    def build(length: int, items, formal=None) -> "GradedSum":
        acc: dict[tuple[int, ...], AlgPoly] = {}
        seen = set() if formal is None else set(formal)
        for vec, poly in items:
            vec = tuple(int(v) for v in vec)
            if len(vec) != length:
                raise ValueError("exponent vector has the wrong length")
            seen.add(vec)
            prev = acc.get(vec)
            acc[vec] = poly if prev is None else prev + poly
        parts = tuple(sorted(((v, p) for v, p in acc.items() if not p.is_zero()),
                             key=lambda item: item[0]))
        return GradedSum(length, parts, frozenset(seen))

    @staticmethod
    def constant(length: int, field: NumberField, value) -> "GradedSum":
        zero = (0,) * length
        if isinstance(value, FieldElement):
            c = value
        else:
            c = field.from_rational(Fraction(value))
        poly = AlgPoly.constant(field, c)
        return GradedSum.build(length, [(zero, poly)], formal=[zero])

    def __add__(self, other: "GradedSum") -> "GradedSum":
        return GradedSum.build(self.length, self.parts + other.parts,
                               formal=self.formal | other.formal)

    def __mul__(self, other: "GradedSum") -> "GradedSum":
        items = []
        for v1, p1 in self.parts:
            for v2, p2 in other.parts:
                items.append((tuple(a + b for a, b in zip(v1, v2)), p1 * p2))
        formal = {tuple(a + b for a, b in zip(v1, v2))
                  for v1 in self.formal for v2 in other.formal}
        return GradedSum.build(self.length, items, formal=formal)

    def scale(self, c) -> "GradedSum":
        return GradedSum.build(self.length,
                               ((v, p.scale(c)) for v, p in self.parts),
                               formal=self.formal)

    def max_log_degree(self) -> int:
        return max((p.degree_in(LOG_VAR) for _, p in self.parts), default=0)


@dataclass(frozen=True)
class BlockSpectrum:
    """Spectral summary of one block: growth rate, positive frequency (None
    for real eigenvalues), block size, and class memberships."""

    rho: RealAlgebraic
    omega: Optional[RealAlgebraic]
    size: int
    rate_class: int
    phase_class: Optional[int]


@dataclass(frozen=True)
class ConeSpec:
    """Everything needed to describe, sample, and widen the orbit cone."""

    A: tuple[tuple[Fraction, ...], ...]
    x0: tuple[Fraction, ...]
    t0: Fraction
    jordan: JordanDecomposition
    spectral: tuple[BlockSpectrum, ...]
    rate_values: tuple[RealAlgebraic, ...]
    phase_frequencies: tuple[RealAlgebraic, ...]
    omega_relations: RelationLattice
    embedding: FieldEmbedding
    rate_field: NumberField
    rate_elements: tuple[FieldElement, ...]
    state: tuple[GradedSum, ...]
    degree_cap: int

    @property
    def dimension(self) -> int:
        return len(self.x0)

    @property
    def n_rate_classes(self) -> int:
        return len(self.rate_values)

    @property
    def n_phase_classes(self) -> int:
        return len(self.phase_frequencies)

    def exponent_value(self, vec: Sequence[int]) -> FieldElement:
        """rho . vec inside the rate field."""
        acc = self.rate_field.zero()
        for c, n in zip(self.rate_elements, vec):
            if n:
                acc = acc + c * Fraction(n)
        return acc

    def phase_box_names(self) -> tuple[str, ...]:
        out = []
        for g in range(self.n_phase_classes):
            out.extend(phase_var_names(g))
        return tuple(out)

    def reserved_names(self) -> set[str]:
        return reserved_variable_names(len(self.spectral),
                                       self.n_phase_classes,
                                       self.n_rate_classes)

    def state_variable_names(self) -> tuple[str, ...]:
        return tuple(f"x{i + 1}" for i in range(self.dimension))

    # -- numeric checks -----------------------------------------------------

    def orbit_enclosure(self, t, prec_bits: int = 96) -> tuple[RatInterval, ...]:
        """Certified per-coordinate enclosure of exp(A t) x0 at rational t."""
        t = Fraction(t)
        width = Fraction(1, 2**prec_bits)
        t_iv = RatInterval.point(t)
        scales = []
        for rho in self.rate_values:
            rho.refine_below(width)
            scales.append(enclose_exp(rho.rat_interval() * t_iv, prec_bits))
        assign: dict[str, RatInterval] = {LOG_VAR: t_iv}
        for g, omega in enumerate(self.phase_frequencies):
            omega.refine_below(width)
            ang = omega.rat_interval() * t_iv
            cname, sname = phase_var_names(g)
            assign[cname] = enclose_cos(ang, prec_bits)
            assign[sname] = enclose_sin(ang, prec_bits)
        out = []
        for gs in self.state:
            total = RatInterval.point(0)
            for vec, poly in gs.parts:
                factor = poly.eval_box(assign, width)
                for c, n in zip(scales, vec):
                    for _ in range(n):
                        factor = factor * c
                total = total + factor
            out.append(total)
        return tuple(out)

    # -- composition --------------------------------------------------------

    def compose(self, poly: Poly) -> GradedSum:
        """Substitute the orbit state into a polynomial over x1..xd."""
        names = self.state_variable_names()
        index = {n: i for i, n in enumerate(names)}
        k = self.n_rate_classes
        field = self.embedding.field
        power_cache: dict[tuple[int, int], GradedSum] = {}

        def state_power(i: int, p: int) -> GradedSum:
            key = (i, p)
            got = power_cache.get(key)
            if got is None:
                if p == 1:
                    got = self.state[i]
                else:
                    got = state_power(i, p - 1) * self.state[i]
                power_cache[key] = got
            return got

        total = GradedSum.build(k, [])
        for mono, coeff in poly.terms:
            term = GradedSum.constant(k, field, coeff)
            for var, p in mono:
                i = index.get(var)
                if i is None:
                    raise ValueError(
                        f"unknown state variable '{var}'; expected one of "
                        f"{', '.join(names)}")
                term = term * state_power(i, p)
            total = total + term
        return total


def validate_error_formula(Y: Formula, dimension: int) -> None:
    """The error set must be quantifier-free over x1..xd."""
    if not Y.is_quantifier_free():
        raise ValueError("error-set formula must be quantifier-free")
    allowed = {f"x{i + 1}" for i in range(dimension)}
    extra = sorted(Y.variables() - allowed)
    if extra:
        raise ValueError(
            f"error-set formula uses variables {extra}; allowed variables "
            f"for dimension {dimension} are x1..x{dimension}")


def _as_fraction_matrix(A) -> tuple[tuple[Fraction, ...], ...]:
    rows = [tuple(Fraction(v) for v in row) for row in A]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("system matrix must be square")
    return tuple(rows)


def build_cone_spec(A, x0, t0=Fraction(0),
                    degree_cap: int = DEFAULT_DEGREE_CAP) -> ConeSpec:
    """Exact spectral analysis of the system and cone parameterization."""
    A = _as_fraction_matrix(A)
    x0 = tuple(Fraction(v) for v in x0)
    if len(x0) != len(A):
        raise ValueError("initial state dimension does not match the matrix")
    t0 = Fraction(t0)
    jd = jordan_decompose(A, degree_cap)

    # rate classes: distinct growth rates, in block order
    rate_values: list[RealAlgebraic] = []
    block_rate: list[int] = []
    for b in jd.blocks:
        for idx, rv in enumerate(rate_values):
            if (b.rho - rv).sign() == 0:
                block_rate.append(idx)
                break
        else:
            block_rate.append(len(rate_values))
            rate_values.append(b.rho)

    # phase classes: one per conjugate eigenvalue group, in block order
    phase_key_to_class: dict[tuple[int, int], int] = {}
    phase_freqs: list[RealAlgebraic] = []
    block_phase: list[Optional[int]] = []
    for b in jd.blocks:
        if b.sign == 0:
            block_phase.append(None)
            continue
        key = (b.factor_index, b.group_index)
        got = phase_key_to_class.get(key)
        if got is None:
            got = len(phase_freqs)
            phase_key_to_class[key] = got
            grp = jd.factors[b.factor_index].groups[b.group_index]
            phase_freqs.append(grp.omega_abs)
        block_phase.append(got)

    spectral = tuple(
        BlockSpectrum(rho=b.rho,
                      omega=(None if b.sign == 0 else jd.factors[
                          b.factor_index].groups[b.group_index].omega_abs),
                      size=b.size,
                      rate_class=block_rate[i],
                      phase_class=block_phase[i])
        for i, b in enumerate(jd.blocks))

    omega_relations = (additive_relations(phase_freqs, degree_cap)
                       if phase_freqs else RelationLattice(0, ()))

    group_fields = []
    for b in jd.blocks:
        group_fields.append(jd.factors[b.factor_index].groups[b.group_index].field)
    embedding = FieldEmbedding(group_fields, degree_cap)

    if rate_values:
        rate_field, rate_coords = common_field(list(rate_values), degree_cap)
        rate_elements = tuple(rate_field.element(c) for c in rate_coords)
    else:
        rate_field = NumberField.rationals()
        rate_elements = ()

    state = _expand_state(jd, x0, embedding, block_rate, block_phase,
                          len(rate_values))

    return ConeSpec(A=A, x0=x0, t0=t0, jordan=jd, spectral=spectral,
                    rate_values=tuple(rate_values),
                    phase_frequencies=tuple(phase_freqs),
                    omega_relations=omega_relations, embedding=embedding,
                    rate_field=rate_field, rate_elements=rate_elements,
                    state=state, degree_cap=degree_cap)


def block_polynomials(jd: JordanDecomposition, x0: Sequence[Fraction]):
    """Per (coordinate, block): the complex polynomial G with
    exp(At) x0 [i] = sum over blocks e^(lambda t) G_{i,b}(t); coefficients are
    complex elements of the block group's real field, ascending in t."""
    d = jd.dimension
    x0 = [Fraction(v) for v in x0]
    y = []
    for j in range(d):
        acc = None
        for l in range(d):
            if x0[l] == 0:
                continue
            term = jd.Pinv_cfe(j, l) * x0[l]
            acc = term if acc is None else acc + term
        y.append(acc)

    out: dict[tuple[int, int], list] = {}
    for b in jd.blocks:
        for i in range(d):
            coeffs = []
            fact = Fraction(1)
            for m in range(b.size):
                if m:
                    fact *= m
                acc = None
                for p in range(b.size - m):
                    yj = y[b.col_offset + p + m]
                    if yj is None:
                        continue
                    term = jd.P_cfe(i, b.col_offset + p) * yj
                    acc = term if acc is None else acc + term
                if acc is not None:
                    coeffs.append(acc * Fraction(1, fact))
                else:
                    coeffs.append(None)
            out[(i, b.index)] = coeffs
    return out


def _expand_state(jd: JordanDecomposition, x0, embedding: FieldEmbedding,
                  block_rate, block_phase, n_rate) -> tuple[GradedSum, ...]:
    d = jd.dimension
    gpolys = block_polynomials(jd, x0)
    field = embedding.field
    states = []
    for i in range(d):
        items = []
        formal = {(0,) * n_rate} if n_rate else {()}
        for b in jd.blocks:
            if b.sign == -1:
                continue  # represented through its conjugate partner
            coeffs = gpolys[(i, b.index)]
            vec = tuple(1 if c == block_rate[b.index] else 0
                        for c in range(n_rate))
            terms = []
            if b.sign == 0:
                for m, c in enumerate(coeffs):
                    if c is None:
                        continue
                    if not c.is_real():
                        raise AssertionError(
                            "real spectral block produced a complex "
                            "orbit coefficient")
                    re = embedding.embed(c.re)
                    mono = ((LOG_VAR, m),) if m else ()
                    terms.append((mono, re))
            else:
                cname, sname = phase_var_names(block_phase[b.index])
                for m, c in enumerate(coeffs):
                    if c is None:
                        continue
                    re = embedding.embed(c.re) * Fraction(2)
                    im = embedding.embed(c.im) * Fraction(-2)
                    base = ((LOG_VAR, m),) if m else ()
                    if not re.is_zero():
                        terms.append((base + ((cname, 1),), re))
                    if not im.is_zero():
                        terms.append((base + ((sname, 1),), im))
            poly = AlgPoly.from_terms(field, terms)
            formal.add(vec)
            if not poly.is_zero():
                items.append((vec, poly))
        states.append(GradedSum.build(n_rate, items, formal=formal))
    return tuple(states)
