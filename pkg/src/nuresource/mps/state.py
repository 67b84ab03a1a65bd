"""Matrix product states with a tracked orthogonality center.

Each site tensor has shape ``(left_bond, 2, right_bond)``; the outer bonds
have dimension 1. Tensors left of ``ortho_center`` are left-orthonormal and
tensors right of it are right-orthonormal.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
import opt_einsum as oe
import scipy.linalg
from numpy.typing import NDArray

from nuresource.core.exceptions import NumericalError, ValidationError
from nuresource.exact.measure import SCHMIDT_TOLERANCE
from nuresource.exact.state import StateVector
from nuresource.model.hamiltonian import FLAVOR_VECTORS, MAX_DENSE_SITES
from nuresource.model.system import SystemSpec
from nuresource.resources.spectrum import EntanglementSpectrum
from nuresource.utils.validation import check_capacity, validate_site

logger = logging.getLogger(__name__)

# Singular values below this fraction of the largest are numerical zeros
RANK_TOLERANCE = 1e-14

DEGENERACY_TOLERANCE = 1e-12


@dataclass(frozen=True)
class TruncationParams:
    """Bond-dimension control for SVD splits.

    Attributes:
        max_bond: Cap on every bond dimension (None for no cap)
        svd_cutoff: Additional absolute singular-value cutoff (0 disables)
    """

    max_bond: int | None = None
    svd_cutoff: float = 0.0

    def __post_init__(self):
        if self.max_bond is not None and self.max_bond < 1:
            raise ValidationError(f"max_bond must be at least 1, got {self.max_bond}")
        if self.svd_cutoff < 0:
            raise ValidationError(f"svd_cutoff cannot be negative, got {self.svd_cutoff}")


@dataclass
class SplitResult:
    """Truncated SVD factors of a matrix.

    Attributes:
        u: Left factor with orthonormal columns
        s: Kept singular values, renormalized to unit 2-norm
        vh: Right factor with orthonormal rows
        discarded_weight: Normalized squared weight of dropped values
    """

    u: NDArray[np.complex128]
    s: NDArray[np.float64]
    vh: NDArray[np.complex128]
    discarded_weight: float


def truncated_svd(
    matrix: NDArray[np.complex128],
    truncation: TruncationParams | None = None,
    site: int | None = None,
    full_rank: bool = False,
) -> SplitResult:
    """SVD keeping min(cap, natural rank) singular values.

    With ``full_rank`` the rank is the matrix dimension instead, so
    zero-weight singular vectors are kept up to the cap. A non-zero
    ``svd_cutoff`` overrides ``full_rank``: values at or below it are
    dropped and counted as discarded weight.

    Raises:
        NumericalError: If the matrix is not finite or the SVD fails
    """
    truncation = truncation or TruncationParams()
    if not np.all(np.isfinite(matrix)):
        raise NumericalError("Non-finite tensor entering SVD", site=site)
    try:
        u, s, vh = scipy.linalg.svd(matrix, full_matrices=False, lapack_driver="gesdd")
    except np.linalg.LinAlgError:
        try:
            u, s, vh = scipy.linalg.svd(matrix, full_matrices=False, lapack_driver="gesvd")
        except np.linalg.LinAlgError as e:
            raise NumericalError(f"SVD did not converge: {e}", site=site) from e

    total = float(np.sum(s**2))
    if total == 0.0:
        raise NumericalError("SVD of a zero tensor", site=site)
    threshold = max(truncation.svd_cutoff, RANK_TOLERANCE * s[0])
    if full_rank and truncation.svd_cutoff == 0.0:
        natural = len(s)
    else:
        natural = max(1, int(np.count_nonzero(s > threshold)))
    keep = natural if truncation.max_bond is None else min(natural, truncation.max_bond)

    if (
        keep < natural
        and s[keep] > threshold
        and s[keep - 1] - s[keep] <= DEGENERACY_TOLERANCE * s[0]
    ):
        logger.debug(
            "Degenerate singular values at the truncation boundary (site=%s, keep=%d, s=%.6e)",
            site, keep, s[keep],
        )

    kept = s[:keep]
    discarded = float(np.sum(s[keep:] ** 2)) / total
    kept = kept / np.linalg.norm(kept)
    return SplitResult(u[:, :keep], kept, vh[:keep], discarded)


@dataclass
class MpsState:
    """Open-boundary matrix product state.

    Attributes:
        tensors: Site tensors of shape (left_bond, 2, right_bond)
        ortho_center: Site holding the non-orthonormal tensor
        max_bond: Bond-dimension cap applied by evolution (None for none)
        discarded_weight: Truncation weight accumulated so far
    """

    tensors: list[NDArray[np.complex128]]
    ortho_center: int = 0
    max_bond: int | None = None
    discarded_weight: float = field(default=0.0)

    def __post_init__(self):
        if not self.tensors:
            raise ValidationError("An MPS needs at least one site")
        self.tensors = [np.asarray(t, dtype=np.complex128) for t in self.tensors]
        for i, t in enumerate(self.tensors):
            if t.ndim != 3 or t.shape[1] != 2:
                raise ValidationError(f"Tensor {i} must have shape (l, 2, r), got {t.shape}")
        for i in range(self.n_sites - 1):
            if self.tensors[i].shape[2] != self.tensors[i + 1].shape[0]:
                raise ValidationError(f"Bond mismatch between sites {i} and {i + 1}")
        if self.tensors[0].shape[0] != 1 or self.tensors[-1].shape[2] != 1:
            raise ValidationError("Outer bonds must have dimension 1")
        validate_site(self.ortho_center, self.n_sites)

    @property
    def n_sites(self) -> int:
        return len(self.tensors)

    @property
    def bond_dimensions(self) -> list[int]:
        """Dimensions of the N - 1 internal bonds, left to right."""
        return [t.shape[2] for t in self.tensors[:-1]]

    def copy(self) -> "MpsState":
        return MpsState(
            [t.copy() for t in self.tensors], self.ortho_center, self.max_bond, self.discarded_weight
        )

    def norm(self) -> float:
        """Norm computed from the center tensor (exact in canonical form)."""
        return float(np.linalg.norm(self.tensors[self.ortho_center]))

    def normalize(self) -> None:
        self.tensors[self.ortho_center] = self.tensors[self.ortho_center] / self.norm()

    def move_center(self, site: int) -> None:
        """Shift the orthogonality center to ``site`` by QR decompositions."""
        validate_site(site, self.n_sites)
        while self.ortho_center < site:
            i = self.ortho_center
            left, s, right = self.tensors[i].shape
            q, r = np.linalg.qr(self.tensors[i].reshape(left * s, right))
            self.tensors[i] = q.reshape(left, s, -1)
            self.tensors[i + 1] = oe.contract("ab,bsc->asc", r, self.tensors[i + 1])
            self.ortho_center += 1
        while self.ortho_center > site:
            i = self.ortho_center
            left, s, right = self.tensors[i].shape
            q, r = np.linalg.qr(self.tensors[i].reshape(left, s * right).T)
            self.tensors[i] = q.T.reshape(-1, s, right)
            self.tensors[i - 1] = oe.contract("asb,cb->asc", self.tensors[i - 1], r)
            self.ortho_center -= 1

    def canonical_residual(self) -> float:
        """Largest deviation from left/right orthonormality around the center."""
        residual = 0.0
        for i, t in enumerate(self.tensors):
            if i < self.ortho_center:
                gram = oe.contract("asb,asc->bc", t.conj(), t)
            elif i > self.ortho_center:
                gram = oe.contract("asb,csb->ac", t, t.conj())
            else:
                continue
            residual = max(residual, float(np.max(np.abs(gram - np.eye(gram.shape[0])))))
        return residual

    def to_dense(self) -> StateVector:
        """Contract to a full amplitude vector (site 0 most significant).

        Raises:
            CapacityError: If N exceeds the state-vector limit
        """
        check_capacity("Dense MPS contraction", self.n_sites, MAX_DENSE_SITES)
        psi = self.tensors[0].reshape(2, -1)
        for t in self.tensors[1:]:
            psi = oe.contract("ab,bsc->asc", psi, t).reshape(-1, t.shape[2])
        return StateVector(psi.reshape(-1), self.n_sites)


def product_mps(local_vectors, max_bond: int | None = None) -> MpsState:
    """Bond-dimension-1 MPS of a product state."""
    tensors = [np.asarray(v, dtype=np.complex128).reshape(1, 2, 1) for v in local_vectors]
    return MpsState(tensors, 0, max_bond)


def mps_from_product(spec: SystemSpec, max_bond: int | None = None) -> MpsState:
    """MPS of the configured initial flavor state."""
    return product_mps([FLAVOR_VECTORS[f] for f in spec.initial_config], max_bond)


def mps_from_dense(state: StateVector, max_bond: int | None = None) -> MpsState:
    """Successive SVDs from the left; the center ends on the last site.

    With a cap the result is the sequentially truncated approximation and the
    accumulated discarded weight is recorded.
    """
    n_sites = state.n_sites
    truncation = TruncationParams(max_bond=max_bond)
    tensors = []
    remainder = state.amplitudes.reshape(1, -1)
    discarded = 0.0
    for site in range(n_sites - 1):
        left = remainder.shape[0]
        split = truncated_svd(remainder.reshape(left * 2, -1), truncation, site)
        tensors.append(split.u.reshape(left, 2, -1))
        remainder = split.s[:, None] * split.vh
        discarded += split.discarded_weight
    tensors.append(remainder.reshape(-1, 2, 1))
    mps = MpsState(tensors, n_sites - 1, max_bond, discarded)
    mps.normalize()
    return mps


def expand_bonds(state: MpsState, max_bond: int | None = None) -> None:
    """Grow every bond to min(cap, full dimension) with zero-weight directions.

    The center is moved to site 0 and right-orthonormal tensors gain
    orthonormal complement rows; their left neighbors gain zero columns.
    The represented state is unchanged.
    """
    state.move_center(0)
    n = state.n_sites
    for i in range(n - 1, 0, -1):
        tensor = state.tensors[i]
        left, s, right = tensor.shape
        target = min(s * right, 2**i)
        if max_bond is not None:
            target = min(target, max_bond)
        extra = target - left
        if extra <= 0:
            continue
        rows = tensor.reshape(left, s * right)
        complement = scipy.linalg.null_space(rows)[:, :extra].conj().T
        state.tensors[i] = np.vstack([rows, complement]).reshape(target, s, right)
        neighbor = state.tensors[i - 1]
        state.tensors[i - 1] = np.concatenate(
            [neighbor, np.zeros(neighbor.shape[:2] + (extra,), dtype=np.complex128)], axis=2
        )


def _cut_singular_values(state: MpsState, cut: int) -> NDArray[np.float64]:
    state.move_center(cut - 1)
    center = state.tensors[cut - 1]
    left, s, right = center.shape
    return scipy.linalg.svd(center.reshape(left * s, right), compute_uv=False)


def bond_ranks(state: MpsState, tolerance: float = SCHMIDT_TOLERANCE) -> list[int]:
    """Schmidt rank at every cut k = 1..N-1, counting s > tolerance * s_max.

    Zero-weight directions held by TDVP are not counted, so the ranks match
    the exact engine's Schmidt ranks. Moves the center to site N - 2.
    """
    ranks = []
    for cut in range(1, state.n_sites):
        singular = _cut_singular_values(state, cut)
        ranks.append(int(np.count_nonzero(singular > tolerance * singular[0])))
    return ranks


def max_bond_dimension(state: MpsState) -> int:
    """Largest Schmidt rank over the cuts (1 for a single site).

    ``state.bond_dimensions`` gives the stored sizes, padding included.
    """
    return max(bond_ranks(state), default=1)


def _validate_cut(cut: int, n_sites: int) -> None:
    if isinstance(cut, bool) or not isinstance(cut, (int, np.integer)) or not 1 <= cut < n_sites:
        raise ValidationError(f"Cut must lie in [1, {n_sites - 1}], got {cut}")


def entanglement_spectrum_at_cut(state: MpsState, cut: int) -> EntanglementSpectrum:
    """Schmidt weights across the bond between sites cut - 1 and cut.

    Moves the orthogonality center to site cut - 1. The spectrum is padded
    to 2^min(cut, N - cut).
    """
    _validate_cut(cut, state.n_sites)
    singular = _cut_singular_values(state, cut)
    r = 2 ** min(cut, state.n_sites - cut)
    return EntanglementSpectrum.from_singular_values(singular, r)


def site_density_matrix(state: MpsState, site: int) -> NDArray[np.complex128]:
    """2x2 reduced density matrix of one site; moves the center there."""
    validate_site(site, state.n_sites)
    state.move_center(site)
    center = state.tensors[site]
    rho = oe.contract("asb,atb->st", center, center.conj())
    return rho / np.trace(rho).real


def single_site_spectrum(state: MpsState, site: int) -> EntanglementSpectrum:
    """Eigenvalues {lambda0, lambda1} of a one-site reduced density matrix."""
    if state.n_sites == 1:
        validate_site(site, 1)
        return EntanglementSpectrum(np.array([1.0, 0.0]), 2)
    return EntanglementSpectrum.from_density_matrix(site_density_matrix(state, site))
