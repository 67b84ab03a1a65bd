"""State-vector engine: dense evolution and exact measurements."""

from nuresource.exact.evolution import (
    EvolutionParams,
    IntegratorMethod,
    MatrixFreeHamiltonian,
    Trajectory,
    apply_hamiltonian,
    apply_terms,
    energy,
    evolve_exact,
    mass_jz_expectation,
    propagate,
)
from nuresource.exact.measure import (
    MAX_SRE_SITES,
    CliffordGate,
    apply_clifford,
    full_sre,
    partition_spectrum,
    pauli_moments,
    reduced_density_matrix,
    schmidt_ranks,
    site_spectrum,
)
from nuresource.exact.state import StateVector, apply_local, product_state

__all__ = [
    # State
    "StateVector",
    "apply_local",
    "product_state",
    # Evolution
    "EvolutionParams",
    "IntegratorMethod",
    "MatrixFreeHamiltonian",
    "Trajectory",
    "apply_hamiltonian",
    "apply_terms",
    "energy",
    "evolve_exact",
    "mass_jz_expectation",
    "propagate",
    # Measurement
    "MAX_SRE_SITES",
    "CliffordGate",
    "apply_clifford",
    "full_sre",
    "partition_spectrum",
    "pauli_moments",
    "reduced_density_matrix",
    "schmidt_ranks",
    "site_spectrum",
]
