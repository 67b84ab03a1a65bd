"""Quantum-resource measures of entanglement spectra."""

from nuresource.resources.measures import (
    DEFAULT_ARC_POINTS,
    DEFAULT_ENTROPY_THRESHOLD,
    MAX_GENERIC_RANK,
    BoundCheck,
    BoundTally,
    PhaseRegion,
    antiflatness,
    arc_curve,
    arc_maximum,
    check_bounds,
    nl_sre2,
    nl_sre2_sum,
    phase_region,
    sample_arc,
    tally_bounds,
    two_level_spectrum,
    von_neumann_entropy,
)
from nuresource.resources.record import NAN, RECORD_COLUMNS, ResourceRecord, normalized_entropy
from nuresource.resources.spectrum import EntanglementSpectrum, is_power_of_two, random_spectra

__all__ = [
    "DEFAULT_ARC_POINTS",
    "DEFAULT_ENTROPY_THRESHOLD",
    "MAX_GENERIC_RANK",
    "NAN",
    "RECORD_COLUMNS",
    "ResourceRecord",
    "normalized_entropy",
    "BoundCheck",
    "BoundTally",
    "EntanglementSpectrum",
    "PhaseRegion",
    "antiflatness",
    "arc_curve",
    "arc_maximum",
    "check_bounds",
    "is_power_of_two",
    "nl_sre2",
    "nl_sre2_sum",
    "phase_region",
    "random_spectra",
    "sample_arc",
    "tally_bounds",
    "two_level_spectrum",
    "von_neumann_entropy",
]
