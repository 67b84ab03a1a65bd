"""Physical observables and spectral-split phenomenology."""

from nuresource.observables.polarization import (
    bloch_vector,
    mode_density_matrix,
    polarization,
    purity_residual,
    survival_from_polarization,
    survival_probability,
    to_mass_frame,
)
from nuresource.observables.splits import (
    DEFAULT_WEAK_THRESHOLD,
    STRONG_SPLIT,
    ColocationRow,
    SplitBoundary,
    SplitReport,
    SplitStrength,
    Stationarity,
    SymmetryCheck,
    colocate_resources,
    detect_splits,
    mirror_symmetric,
    pair_symmetry_check,
    stationarity,
)

__all__ = [
    # Polarization
    "bloch_vector",
    "mode_density_matrix",
    "polarization",
    "purity_residual",
    "survival_from_polarization",
    "survival_probability",
    "to_mass_frame",
    # Splits
    "DEFAULT_WEAK_THRESHOLD",
    "STRONG_SPLIT",
    "ColocationRow",
    "SplitBoundary",
    "SplitReport",
    "SplitStrength",
    "Stationarity",
    "SymmetryCheck",
    "colocate_resources",
    "detect_splits",
    "mirror_symmetric",
    "pair_symmetry_check",
    "stationarity",
]
