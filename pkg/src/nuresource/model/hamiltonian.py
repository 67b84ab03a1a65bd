"""Collective-oscillation Hamiltonian in the mass and flavor bases.

    H(t) = -sum_i omega_i J^z_i + 2 mu(t) sum_{i<j} J_i . J_j
         = sum_i h_i + (mu(t) / 2) sum_{i<j} sigma_i . sigma_j

with J = sigma / 2. In the mass basis h_i = -omega_i sigma_z / 2; in the flavor
basis h_i = -omega_i (cos 2theta sigma_z - sin 2theta sigma_x) / 2. The pair
term is an SU(2) scalar and therefore identical in both bases.
"""

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import scipy.sparse as sp
from numpy.typing import NDArray

from nuresource.core.exceptions import ValidationError
from nuresource.model.system import Basis, Flavor, SystemSpec, coupling_at
from nuresource.utils.validation import check_capacity, validate_strictly_increasing

if TYPE_CHECKING:
    from nuresource.exact.state import StateVector

IDENTITY = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

HERMITICITY_TOLERANCE = 1e-14

# 2^14 amplitudes; the sparse Hamiltonian still fits comfortably in memory
MAX_DENSE_SITES = 14

FLAVOR_VECTORS = {
    Flavor.ELECTRON: np.array([1.0, 0.0], dtype=np.complex128),
    Flavor.MUON: np.array([0.0, 1.0], dtype=np.complex128),
}


def pmns_matrix(mixing_angle: float) -> NDArray[np.complex128]:
    """Single-mode rotation U with H_flavor = U H_mass U^dagger."""
    c, s = math.cos(mixing_angle), math.sin(mixing_angle)
    return np.array([[c, s], [-s, c]], dtype=np.complex128)


def mass_sigma_z(mixing_angle: float, basis: Basis = Basis.FLAVOR) -> NDArray[np.complex128]:
    """The mass-basis sigma_z written in the requested basis."""
    if basis is Basis.MASS:
        return SIGMA_Z.copy()
    c2, s2 = math.cos(2 * mixing_angle), math.sin(2 * mixing_angle)
    return c2 * SIGMA_Z - s2 * SIGMA_X


def _vacuum_term(omega: float, mixing_angle: float, basis: Basis) -> NDArray[np.complex128]:
    return -0.5 * omega * mass_sigma_z(mixing_angle, basis)


def build_one_body(spec: SystemSpec, basis: Basis = Basis.FLAVOR) -> list[NDArray[np.complex128]]:
    """Per-site 2x2 vacuum terms h_i in the requested basis.

    Raises:
        ValidationError: If the omegas are not strictly increasing
    """
    validate_strictly_increasing(spec.omegas)
    basis = Basis(basis)
    return [_vacuum_term(w, spec.mixing_angle, basis) for w in spec.omegas]


@dataclass(frozen=True)
class HamiltonianTerms:
    """H = sum_i one_body[i] (on site i) + pair_coupling * sum_{i<j} sigma_i . sigma_j."""

    one_body: tuple[NDArray[np.complex128], ...]
    pair_coupling: float

    def __post_init__(self):
        matrices = tuple(np.asarray(m, dtype=np.complex128) for m in self.one_body)
        object.__setattr__(self, "one_body", matrices)
        for i, m in enumerate(matrices):
            if m.shape != (2, 2):
                raise ValidationError(f"One-body term {i} must be 2x2, got {m.shape}")
            if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOLERANCE:
                raise ValidationError(f"One-body term {i} is not Hermitian")
        if not math.isfinite(self.pair_coupling):
            raise ValidationError(f"pair_coupling must be finite, got {self.pair_coupling}")

    @property
    def n_sites(self) -> int:
        return len(self.one_body)


def hamiltonian_terms(spec: SystemSpec, t: float, basis: Basis = Basis.FLAVOR) -> HamiltonianTerms:
    """Terms of H(t); the pair factor is mu(t) / 2 (see module docstring)."""
    return HamiltonianTerms(
        one_body=tuple(build_one_body(spec, basis)),
        pair_coupling=0.5 * coupling_at(spec.coupling, t),
    )


def embed_operator(operator, site: int, n_sites: int) -> sp.csr_matrix:
    """Sparse 2^N x 2^N embedding of a single-site operator."""
    left = sp.identity(2**site, dtype=np.complex128, format="csr")
    right = sp.identity(2 ** (n_sites - site - 1), dtype=np.complex128, format="csr")
    return sp.kron(sp.kron(left, sp.csr_matrix(operator)), right, format="csr")


def one_body_matrix(one_body) -> sp.csr_matrix:
    """Sparse sum of embedded one-body terms."""
    n_sites = len(one_body)
    total = sp.csr_matrix((2**n_sites, 2**n_sites), dtype=np.complex128)
    for site, h in enumerate(one_body):
        total = total + embed_operator(h, site, n_sites)
    return total


def pair_exchange_matrix(n_sites: int) -> sp.csr_matrix:
    """Sparse sum_{i<j} (XX + YY + ZZ)_{ij}."""
    dim = 2**n_sites
    total = sp.csr_matrix((dim, dim), dtype=np.complex128)
    embedded = [[embed_operator(p, site, n_sites) for p in PAULIS] for site in range(n_sites)]
    for i in range(n_sites):
        for j in range(i + 1, n_sites):
            for a in range(3):
                total = total + embedded[i][a] @ embedded[j][a]
    return total


def dense_from_terms(terms: HamiltonianTerms) -> sp.csr_matrix:
    """Full-Hilbert-space Hamiltonian assembled from its terms.

    Raises:
        CapacityError: If the system has more than MAX_DENSE_SITES modes
    """
    check_capacity(
        "Full-space Hamiltonian", terms.n_sites, MAX_DENSE_SITES, "use the MPS engine"
    )
    matrix = one_body_matrix(terms.one_body)
    if terms.n_sites > 1 and terms.pair_coupling != 0.0:
        matrix = matrix + terms.pair_coupling * pair_exchange_matrix(terms.n_sites)
    return matrix.tocsr()


def dense_hamiltonian(spec: SystemSpec, t: float, basis: Basis = Basis.FLAVOR) -> sp.csr_matrix:
    """H(t) on the full 2^N space as a sparse matrix (``.toarray()`` for dense).

    Raises:
        CapacityError: If N exceeds MAX_DENSE_SITES
    """
    check_capacity("Full-space Hamiltonian", spec.n_sites, MAX_DENSE_SITES, "use the MPS engine")
    return dense_from_terms(hamiltonian_terms(spec, t, basis))


def total_mass_jz(spec: SystemSpec, basis: Basis = Basis.FLAVOR) -> sp.csr_matrix:
    """Sparse sum_i sigma_z^(mass, i) / 2 in the requested basis."""
    check_capacity("Full-space operator", spec.n_sites, MAX_DENSE_SITES)
    local = 0.5 * mass_sigma_z(spec.mixing_angle, Basis(basis))
    return one_body_matrix([local] * spec.n_sites)


def initial_state(spec: SystemSpec) -> "StateVector":
    """Flavor-basis product state of the configured initial flavors."""
    # the state-vector package itself builds on this module
    from nuresource.exact.state import product_state

    return product_state([FLAVOR_VECTORS[f] for f in spec.initial_config])
