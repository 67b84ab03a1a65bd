"""Matrix-product-state engine: MPO construction and two-site TDVP."""

from nuresource.mps.evolution import MpsTrajectory, evolve_mps
from nuresource.mps.mpo import MPO_BOND, HamiltonianMpo, build_mpo, mpo_from_terms
from nuresource.mps.state import (
    MpsState,
    SplitResult,
    TruncationParams,
    bond_ranks,
    entanglement_spectrum_at_cut,
    expand_bonds,
    max_bond_dimension,
    mps_from_dense,
    mps_from_product,
    product_mps,
    single_site_spectrum,
    site_density_matrix,
    truncated_svd,
)
from nuresource.mps.tdvp import TdvpStep, mpo_expectation, tdvp2_step

__all__ = [
    # State
    "MpsState",
    "SplitResult",
    "TruncationParams",
    "bond_ranks",
    "entanglement_spectrum_at_cut",
    "expand_bonds",
    "max_bond_dimension",
    "mps_from_dense",
    "mps_from_product",
    "product_mps",
    "single_site_spectrum",
    "site_density_matrix",
    "truncated_svd",
    # Operator
    "MPO_BOND",
    "HamiltonianMpo",
    "build_mpo",
    "mpo_from_terms",
    # Evolution
    "MpsTrajectory",
    "TdvpStep",
    "evolve_mps",
    "mpo_expectation",
    "tdvp2_step",
]
