"""Dense state vectors and local operator application.

Amplitudes are stored flat with site 0 as the most significant bit; local
operators act on the ``(2,) * N`` tensor view, so applying a k-site operator
costs O(2^N) without building any 2^N x 2^N matrix.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from nuresource.core.exceptions import ValidationError
from nuresource.utils.validation import validate_site

NORM_TOLERANCE = 1e-10


@dataclass
class StateVector:
    """Pure state of N two-level modes in the flavor basis.

    Attributes:
        amplitudes: Complex vector of length 2^N
        n_sites: Number of modes N
    """

    amplitudes: NDArray[np.complex128]
    n_sites: int

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if self.n_sites < 1:
            raise ValidationError(f"n_sites must be at least 1, got {self.n_sites}")
        if self.amplitudes.size != 2**self.n_sites:
            raise ValidationError(
                f"State of {self.n_sites} sites needs {2**self.n_sites} amplitudes, "
                f"got {self.amplitudes.size}"
            )

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize: bool = False) -> "StateVector":
        """Wrap a flat amplitude vector, inferring N from its length."""
        flat = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        n_sites = int(round(np.log2(flat.size))) if flat.size > 0 else 0
        if flat.size == 0 or 2**n_sites != flat.size:
            raise ValidationError(f"Amplitude count {flat.size} is not a power of two")
        if normalize:
            flat = flat / np.linalg.norm(flat)
        return cls(flat, n_sites)

    @property
    def dimension(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tolerance: float = NORM_TOLERANCE) -> bool:
        return abs(self.norm() - 1.0) <= tolerance

    def normalized(self) -> "StateVector":
        return StateVector(self.amplitudes / self.norm(), self.n_sites)

    def copy(self) -> "StateVector":
        return StateVector(self.amplitudes.copy(), self.n_sites)

    def as_tensor(self) -> NDArray[np.complex128]:
        """View of the amplitudes with one axis per site."""
        return self.amplitudes.reshape((2,) * self.n_sites)

    def overlap(self, other: "StateVector") -> complex:
        """<self|other>."""
        self._check_compatible(other)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "StateVector") -> float:
        """|<self|other>|^2."""
        return abs(self.overlap(other)) ** 2

    def kron(self, other: "StateVector") -> "StateVector":
        """Tensor product with ``self`` on the leading sites."""
        return StateVector(np.kron(self.amplitudes, other.amplitudes), self.n_sites + other.n_sites)

    def _check_compatible(self, other: "StateVector") -> None:
        if other.n_sites != self.n_sites:
            raise ValidationError(
                f"Dimension mismatch: {self.n_sites} sites vs {other.n_sites} sites"
            )


def product_state(local_vectors) -> StateVector:
    """Tensor product of single-site vectors, first vector on site 0."""
    vectors = [np.asarray(v, dtype=np.complex128).reshape(2) for v in local_vectors]
    amplitudes = vectors[0]
    for v in vectors[1:]:
        amplitudes = np.kron(amplitudes, v)
    return StateVector(amplitudes, len(vectors))


def apply_local(
    amplitudes: NDArray[np.complex128],
    n_sites: int,
    operator: NDArray[np.complex128],
    sites: tuple[int, ...],
) -> NDArray[np.complex128]:
    """Apply a 2^k x 2^k operator to the given sites of a flat amplitude vector.

    The operator's row/column index uses the same most-significant-first
    ordering as the full state restricted to ``sites``.
    """
    k = len(sites)
    for site in sites:
        validate_site(site, n_sites)
    if len(set(sites)) != k:
        raise ValidationError(f"Operator sites must be distinct, got {sites}")

    psi = amplitudes.reshape((2,) * n_sites)
    op = np.asarray(operator, dtype=np.complex128).reshape((2,) * (2 * k))
    out = np.tensordot(op, psi, axes=(list(range(k, 2 * k)), list(sites)))
    # tensordot puts the operator's output axes first; move them back in place
    out = np.moveaxis(out, list(range(k)), list(sites))
    return np.ascontiguousarray(out).reshape(-1)
