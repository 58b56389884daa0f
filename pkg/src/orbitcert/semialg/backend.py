"""External quantifier-elimination backend over a line-based subprocess protocol.

Request: one formula in the textual grammar, newline-escaped, on stdin.
Response: one line on stdout — either a formula in the same grammar or the
word ``unsupported``.

Backend output is never trusted as-is.  The response must be quantifier
free and mention only the request's free variables; its truth value is
then compared against the quantified original on random rational sample
points, deciding the original with the rigorous box prover wherever that
is feasible (single box-bounded quantifier block).  Any mismatch raises
``BackendDisagreement`` carrying the offending sample.
"""

from __future__ import annotations

import random
import subprocess
from fractions import Fraction
from typing import Optional, Sequence

from ..errors import BackendDisagreement, BackendUnavailable, ParseError
from .boxprove import decide_forall_box
from .formula import Formula, Not, Poly, Quant, eval_formula, substitute
from .sexpr import format_formula, parse_formula


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace("\n", "\\n")


def _unescape(text: str) -> str:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\\" and i + 1 < len(text):
            nxt = text[i + 1]
            if nxt == "n":
                out.append("\n")
                i += 2
                continue
            if nxt == "\\":
                out.append("\\")
                i += 2
                continue
        out.append(ch)
        i += 1
    return "".join(out)


def _run_backend(cmd: Sequence[str], request: str, timeout: float) -> str:
    try:
        proc = subprocess.run(list(cmd), input=_escape(request) + "\n",
                              capture_output=True, text=True, timeout=timeout)
    except FileNotFoundError as e:
        raise BackendUnavailable(f"backend command not found: {e}") from e
    except subprocess.TimeoutExpired as e:
        raise BackendUnavailable("backend timed out") from e
    if proc.returncode != 0:
        raise BackendUnavailable(
            f"backend exited with status {proc.returncode}: {proc.stderr.strip()[:200]}")
    line = proc.stdout.splitlines()[0] if proc.stdout.splitlines() else ""
    if not line.strip():
        raise BackendUnavailable("backend produced no response")
    return _unescape(line.strip())


def decide_quantified_at(phi: Formula, point: dict, depth: int) -> Optional[bool]:
    """Truth of a quantified formula at an assignment of its free variables.

    Feasible when substitution leaves one outer quantifier block whose
    bindings all carry box bounds and whose body is quantifier-free;
    returns None when the rigorous check cannot decide.
    """
    subs = {v: Poly.constant(val) for v, val in point.items()}
    g = substitute(phi, subs)
    if g.is_quantifier_free():
        return eval_formula(g, {})
    if not isinstance(g, Quant) or not g.body.is_quantifier_free():
        return None
    if any(lo is None or hi is None for _, lo, hi in g.bindings):
        return None
    box = {var: (lo, hi) for var, lo, hi in g.bindings}
    if g.kind == "forall":
        res = decide_forall_box(g.body, box, depth)
    else:
        res = decide_forall_box(Not(g.body), box, depth)
    if res.value == "unknown":
        return None
    holds_universally = res.value == "true"
    return holds_universally if g.kind == "forall" else not holds_universally


def external_qe(phi: Formula, backend_cmd: Sequence[str], *, seed: int = 0,
                samples: int = 100, verify_depth: int = 8,
                timeout: float = 60.0) -> Formula:
    """Quantifier elimination through a configured backend, re-verified.

    Quantifier-free input is returned unchanged without consulting the
    backend.  Raises BackendUnavailable when no usable response arrives and
    BackendDisagreement when the response fails re-verification.
    """
    if phi.is_quantifier_free():
        return phi
    if not backend_cmd:
        raise BackendUnavailable("no backend command configured")
    response = _run_backend(backend_cmd, format_formula(phi), timeout)
    if response == "unsupported":
        raise BackendUnavailable("backend reported the request as unsupported")
    try:
        result = parse_formula(response)
    except ParseError as e:
        raise BackendUnavailable(f"backend response is not well-formed: {e}") from e
    if not result.is_quantifier_free():
        raise BackendDisagreement("backend response is not quantifier-free")
    free = sorted(phi.variables())
    extra = result.variables() - set(free)
    if extra:
        raise BackendDisagreement(
            f"backend response mentions unknown variables {sorted(extra)}")

    rng = random.Random(seed)
    for _ in range(samples):
        pt = {v: Fraction(rng.randint(-80, 80), 8) for v in free}
        want = decide_quantified_at(phi, pt, verify_depth)
        if want is None:
            continue
        got = eval_formula(result, pt)
        if got != want:
            raise BackendDisagreement(
                "backend response disagrees with the original formula",
                sample=pt)
    return result
