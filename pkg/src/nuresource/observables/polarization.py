"""Polarization vectors and mass-eigenstate survival probabilities.

P = 2 <J> = (<sigma_x>, <sigma_y>, <sigma_z>) of one mode, read off its 2x2
reduced density matrix rho = (1 + P . sigma) / 2. The mass-basis vector is
the flavor-basis vector rotated by 2 theta about the y axis.
"""

import math
from typing import Union

import numpy as np
from numpy.typing import NDArray

from nuresource.core.exceptions import ValidationError
from nuresource.exact.measure import reduced_density_matrix
from nuresource.exact.state import StateVector
from nuresource.model.system import Basis
from nuresource.mps.state import MpsState, site_density_matrix
from nuresource.utils.validation import validate_site

AnyState = Union[StateVector, MpsState]


def mode_density_matrix(state: AnyState, site: int) -> NDArray[np.complex128]:
    """2x2 reduced density matrix of one mode from either engine's state."""
    if isinstance(state, MpsState):
        return site_density_matrix(state, site)
    validate_site(site, state.n_sites)
    if state.n_sites == 1:
        psi = state.amplitudes
        return np.outer(psi, psi.conj())
    return reduced_density_matrix(state, [site])


def bloch_vector(rho: NDArray[np.complex128]) -> NDArray[np.float64]:
    """(Px, Py, Pz) of a qubit density matrix."""
    if rho.shape != (2, 2):
        raise ValidationError(f"Expected a 2x2 density matrix, got {rho.shape}")
    return np.array([2.0 * rho[0, 1].real, -2.0 * rho[0, 1].imag, (rho[0, 0] - rho[1, 1]).real])


def to_mass_frame(vector: NDArray[np.float64], mixing_angle: float) -> NDArray[np.float64]:
    """Rotate a flavor-basis polarization into the mass basis."""
    px, py, pz = vector
    c2, s2 = math.cos(2 * mixing_angle), math.sin(2 * mixing_angle)
    return np.array([c2 * px + s2 * pz, py, c2 * pz - s2 * px])


def polarization(
    state: AnyState,
    site: int,
    basis: Basis = Basis.FLAVOR,
    mixing_angle: float = 0.1,
) -> NDArray[np.float64]:
    """Polarization vector of one mode.

    Raises:
        ValidationError: If the site is out of range
    """
    vector = bloch_vector(mode_density_matrix(state, site))
    if Basis(basis) is Basis.MASS:
        vector = to_mass_frame(vector, mixing_angle)
    return np.clip(vector, -1.0, 1.0)


def survival_from_polarization(vector: NDArray[np.float64], mixing_angle: float) -> float:
    """P_nu1 = (1 + P_z^mass) / 2 from a flavor-basis vector."""
    pz_mass = to_mass_frame(vector, mixing_angle)[2]
    return float(min(1.0, max(0.0, 0.5 * (1.0 + pz_mass))))


def survival_probability(state: AnyState, site: int, mixing_angle: float = 0.1) -> float:
    """Probability that a mode is found in the first mass eigenstate."""
    return survival_from_polarization(polarization(state, site), mixing_angle)


def purity_residual(rho: NDArray[np.complex128]) -> float:
    """| |P|^2 - (1 - 4 det rho) |, zero for any valid qubit state."""
    vector = bloch_vector(rho)
    return abs(float(vector @ vector) - (1.0 - 4.0 * np.linalg.det(rho).real))
