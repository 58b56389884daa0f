"""Certificate synthesis: cone construction, widened-cone certificates,
eventual-avoidance decisions and whole-trajectory invariant emission."""

from .conespec import (
    ConeSpec,
    GradedSum,
    build_cone_spec,
    validate_error_formula,
)
from .decide import (
    DecideConfig,
    DecisionOutcome,
    NotExistsWitness,
    decide_eventual,
    verify_witness,
)
from .fatcone import (
    FatConeCertificate,
    fat_cone_rates,
    invariance_threshold,
    synthesize_fat_cone,
)
from .sample import cone_membership_sample, cone_membership_sample_logtime
from .whole_orbit import emit_whole_orbit_invariant

__all__ = [
    "ConeSpec",
    "DecideConfig",
    "DecisionOutcome",
    "FatConeCertificate",
    "GradedSum",
    "NotExistsWitness",
    "build_cone_spec",
    "cone_membership_sample",
    "cone_membership_sample_logtime",
    "decide_eventual",
    "emit_whole_orbit_invariant",
    "fat_cone_rates",
    "invariance_threshold",
    "synthesize_fat_cone",
    "validate_error_formula",
    "verify_witness",
]
