"""Exact measurements on dense state vectors."""

import logging
import math
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from enum import Enum

import numpy as np
from numpy.typing import NDArray

from nuresource.core.exceptions import ValidationError
from nuresource.exact.state import StateVector, apply_local
from nuresource.resources.spectrum import EntanglementSpectrum
from nuresource.utils.validation import check_capacity, validate_partition, validate_site

logger = logging.getLogger(__name__)

# 4^N Pauli strings of cost 2^N each
MAX_SRE_SITES = 10

SCHMIDT_TOLERANCE = 1e-12


def reduced_density_matrix(state: StateVector, partition: Iterable[int]) -> NDArray[np.complex128]:
    """rho_A = Tr_B |psi><psi| for a subsystem A.

    The rows of rho_A follow the sorted sites of A, lowest site most
    significant.

    Raises:
        ValidationError: If the partition is empty, total, or out of range
    """
    sites = validate_partition(partition, state.n_sites)
    rest = [s for s in range(state.n_sites) if s not in sites]
    matrix = np.transpose(state.as_tensor(), list(sites) + rest).reshape(2 ** len(sites), -1)
    return matrix @ matrix.conj().T


def partition_spectrum(state: StateVector, partition: Iterable[int]) -> EntanglementSpectrum:
    """Eigenvalues of rho_A padded to 2^|A|."""
    return EntanglementSpectrum.from_density_matrix(reduced_density_matrix(state, partition))


def site_spectrum(state: StateVector, site: int) -> EntanglementSpectrum:
    """Spectrum of a single mode."""
    return partition_spectrum(state, [validate_site(site, state.n_sites)])


def schmidt_ranks(state: StateVector, tolerance: float = SCHMIDT_TOLERANCE) -> list[int]:
    """Schmidt rank at every cut k = 1..N-1, counting s > tolerance * s_max."""
    ranks = []
    for cut in range(1, state.n_sites):
        singular = np.linalg.svd(state.amplitudes.reshape(2**cut, -1), compute_uv=False)
        ranks.append(int(np.count_nonzero(singular > tolerance * singular[0])))
    return ranks


def _walsh_hadamard(tensor: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """sum_b (-1)^(z.b) v[b] for every z, one butterfly per axis."""
    out = tensor
    for axis in range(tensor.ndim):
        a0 = np.take(out, 0, axis=axis)
        a1 = np.take(out, 1, axis=axis)
        out = np.stack((a0 + a1, a0 - a1), axis=axis)
    return out


def _pauli_moment_chunk(
    psi: NDArray[np.complex128], alpha: float, start: int, stop: int
) -> NDArray[np.float64]:
    """sum_z |<X^g Z^z>|^(2 alpha) for Gray codes g of k in [start, stop)."""
    n_sites = psi.ndim
    index = np.arange(2**n_sites)
    gray = start ^ (start >> 1)
    shifted = psi.reshape(-1)[index ^ gray].reshape(psi.shape)
    moments = np.empty(stop - start)
    for k in range(start, stop):
        if k > start:
            bit = (k & -k).bit_length() - 1
            shifted = np.flip(shifted, axis=n_sites - 1 - bit)
        expectations = _walsh_hadamard(shifted.conj() * psi)
        moments[k - start] = np.sum(np.abs(expectations) ** (2 * alpha))
    return moments


def pauli_moments(state: StateVector, alpha: float = 2.0, workers: int = 1) -> NDArray[np.float64]:
    """Per X-pattern sums of |<P>|^(2 alpha) over all Z-patterns, in Gray order.

    Partial sums are stored by pattern index, so any worker count yields the
    same array.
    """
    check_capacity("Full stabilizer Renyi entropy", state.n_sites, MAX_SRE_SITES,
                   "use the spectrum-based nl_sre2 instead")
    psi = state.as_tensor()
    total = 2**state.n_sites
    workers = max(1, min(workers, total))
    bounds = np.linspace(0, total, workers + 1).astype(int)
    chunks = list(zip(bounds[:-1], bounds[1:], strict=True))
    if workers == 1:
        return _pauli_moment_chunk(psi, alpha, 0, total)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        parts = list(executor.map(lambda c: _pauli_moment_chunk(psi, alpha, c[0], c[1]), chunks))
    return np.concatenate(parts)


def full_sre(state: StateVector, alpha: float = 2.0, workers: int = 1) -> float:
    """Stabilizer Renyi entropy M_alpha of the whole state.

    M_alpha = ln(sum_P |<P>|^(2 alpha) / 2^N) / (1 - alpha), enumerating all
    4^N Pauli strings.

    Raises:
        CapacityError: If N exceeds MAX_SRE_SITES
        ValidationError: If alpha is 1 or not positive
    """
    if not alpha > 0:
        raise ValidationError(f"alpha must be positive, got {alpha}")
    if alpha == 1:
        raise ValidationError("alpha = 1 (Shannon limit) is not supported")
    moments = pauli_moments(state, alpha, workers)
    value = math.log(float(np.sum(moments)) / 2**state.n_sites) / (1.0 - alpha)
    # stabilizer states give exactly zero up to round-off
    return 0.0 if abs(value) < 1e-14 else value


class CliffordGate(Enum):
    """Generators of the Clifford group."""

    H = "H"
    S = "S"
    CNOT = "CNOT"


CLIFFORD_MATRICES = {
    CliffordGate.H: np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2),
    CliffordGate.S: np.array([[1, 0], [0, 1j]], dtype=np.complex128),
    CliffordGate.CNOT: np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
    ),
}


def apply_clifford(state: StateVector, gate: CliffordGate | str, sites: int | Sequence[int]) -> StateVector:
    """Apply H or S to one site, or CNOT to (control, target).

    Raises:
        ValidationError: On an unknown gate, wrong site count or bad index
    """
    try:
        gate = CliffordGate(gate.upper() if isinstance(gate, str) else gate)
    except ValueError as e:
        raise ValidationError(f"Unknown Clifford gate '{gate}'", "use H, S or CNOT") from e
    targets = (sites,) if isinstance(sites, (int, np.integer)) else tuple(sites)
    expected = 2 if gate is CliffordGate.CNOT else 1
    if len(targets) != expected:
        raise ValidationError(f"{gate.value} acts on {expected} site(s), got {targets}")
    amplitudes = apply_local(state.amplitudes, state.n_sites, CLIFFORD_MATRICES[gate], targets)
    return StateVector(amplitudes, state.n_sites)
