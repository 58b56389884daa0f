"""Shared exception types."""


class OrbitcertError(Exception):
    """Base class for all library-specific errors."""


class ParseError(OrbitcertError):
    """Malformed textual input (rational, polynomial, formula, problem file)."""


class DegreeCapExceeded(OrbitcertError):
    """An algebraic-number construction would exceed the configured degree cap.

    Carries the offending degree and the cap so callers can report or retry
    with a larger cap.
    """

    def __init__(self, degree: int, cap: int, context: str = ""):
        self.degree = degree
        self.cap = cap
        self.context = context
        msg = f"field degree {degree} exceeds cap {cap}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


class PrecisionUnreachable(OrbitcertError):
    """A requested enclosure width could not be reached within the refinement budget."""


class UnboundVariable(OrbitcertError):
    """A formula operation met a variable with no assignment or declaration."""


class BackendUnavailable(OrbitcertError):
    """No external quantifier-elimination backend is configured or it failed to start."""


class BackendDisagreement(OrbitcertError):
    """An external backend's answer failed independent re-verification.

    Carries the sample point where the backend's formula and the original
    disagreed.
    """

    def __init__(self, message: str, sample=None):
        self.sample = sample
        super().__init__(message)


class NoCertificate(OrbitcertError):
    """Certificate synthesis failed its own exact re-verification; the partial
    construction is unsound and is not returned."""


class NotOnTorus(OrbitcertError):
    """A phase assignment does not lie on the system's relation torus: either
    a pair is off the unit circle or a lattice relation is violated."""
