"""Lanczos propagator for Hermitian operators given only as a matvec.

Shared by the state-vector engine (full Hilbert space) and the two-site
TDVP sweeps (local effective Hamiltonians). The Krylov basis is fully
re-orthogonalized: bases are short (tens of vectors) and loss of
orthogonality would otherwise leak norm over long runs.
"""

from collections.abc import Callable

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import eigh_tridiagonal

Matvec = Callable[[NDArray[np.complex128]], NDArray[np.complex128]]

# Relative size of the residual below which the Krylov space is invariant
BREAKDOWN_TOLERANCE = 1e-14


def lanczos_tridiagonal(
    matvec: Matvec,
    v0: NDArray[np.complex128],
    krylov_dim: int,
) -> tuple[NDArray[np.complex128], NDArray[np.float64], NDArray[np.float64]]:
    """Build an orthonormal Krylov basis and the projected tridiagonal matrix.

    Args:
        matvec: Action of the Hermitian operator on a flat vector
        v0: Nonzero starting vector (normalized internally)
        krylov_dim: Maximum number of basis vectors

    Returns:
        (basis, alphas, betas) where ``basis`` has one basis vector per row.
        Fewer than ``krylov_dim`` rows are returned on a lucky breakdown.
    """
    n = v0.size
    dim = max(1, min(krylov_dim, n))
    basis = np.zeros((dim, n), dtype=np.complex128)
    basis[0] = v0 / np.linalg.norm(v0)
    alphas: list[float] = []
    betas: list[float] = []

    for j in range(dim):
        w = np.asarray(matvec(basis[j]), dtype=np.complex128).reshape(-1)
        alpha = float(np.vdot(basis[j], w).real)
        alphas.append(alpha)
        if j == dim - 1:
            break
        w = w - alpha * basis[j]
        if j > 0:
            w = w - betas[-1] * basis[j - 1]
        w = w - basis[: j + 1].T @ (basis[: j + 1].conj() @ w)
        beta = float(np.linalg.norm(w))
        if beta <= BREAKDOWN_TOLERANCE * max(1.0, abs(alpha)):
            break
        betas.append(beta)
        basis[j + 1] = w / beta

    k = len(alphas)
    return basis[:k], np.array(alphas), np.array(betas[: k - 1])


def expm_krylov(
    matvec: Matvec,
    vector: NDArray[np.complex128],
    dt: float,
    krylov_dim: int = 16,
) -> NDArray[np.complex128]:
    """Compute exp(-i dt H) @ vector in a Krylov subspace.

    ``dt`` may be negative (backward propagation, used by TDVP's
    bond/site back-evolution and by time-reversal checks).
    """
    flat = np.asarray(vector, dtype=np.complex128).reshape(-1)
    norm = np.linalg.norm(flat)
    if norm == 0.0:
        return flat.copy().reshape(np.shape(vector))

    basis, alphas, betas = lanczos_tridiagonal(matvec, flat, krylov_dim)
    if alphas.size == 1:
        coefficients = np.array([np.exp(-1j * dt * alphas[0])])
    else:
        evals, evecs = eigh_tridiagonal(alphas, betas)
        coefficients = evecs @ (np.exp(-1j * dt * evals) * evecs[0, :])

    result = norm * (basis.T @ coefficients)
    return result.reshape(np.shape(vector))
