"""Physical model: system description and collective Hamiltonian."""

from nuresource.model.hamiltonian import (
    MAX_DENSE_SITES,
    PAULIS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    HamiltonianTerms,
    build_one_body,
    dense_from_terms,
    dense_hamiltonian,
    hamiltonian_terms,
    initial_state,
    mass_sigma_z,
    pmns_matrix,
    total_mass_jz,
)
from nuresource.model.system import (
    Basis,
    CouplingKind,
    CouplingProfile,
    Flavor,
    SystemSpec,
    coupling_at,
    default_omegas,
    format_flavor_config,
    parse_flavor_config,
)

__all__ = [
    # System
    "Basis",
    "CouplingKind",
    "CouplingProfile",
    "Flavor",
    "SystemSpec",
    "coupling_at",
    "default_omegas",
    "format_flavor_config",
    "parse_flavor_config",
    # Hamiltonian
    "HamiltonianTerms",
    "MAX_DENSE_SITES",
    "PAULIS",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "build_one_body",
    "dense_from_terms",
    "dense_hamiltonian",
    "hamiltonian_terms",
    "initial_state",
    "mass_sigma_z",
    "pmns_matrix",
    "total_mass_jz",
]
