"""Symmetric two-site TDVP sweeps.

A step of size dt is a left-to-right half sweep followed by a right-to-left
half sweep. Each two-site block is evolved forward by dt/2 and split by a
truncated SVD; the site that then carries the center is evolved backward by
dt/2 before the sweep moves on. Local problems use the Lanczos exponential.

Environment index convention: ``(bra_bond, mpo_bond, ket_bond)``.
"""

import logging
from dataclasses import dataclass

import numpy as np
import opt_einsum as oe
from numpy.typing import NDArray

from nuresource.core.exceptions import NumericalError, ValidationError
from nuresource.mps.mpo import HamiltonianMpo
from nuresource.mps.state import MpsState, TruncationParams, expand_bonds, truncated_svd
from nuresource.utils.krylov import expm_krylov

logger = logging.getLogger(__name__)

_TRIVIAL_ENV = np.ones((1, 1, 1), dtype=np.complex128)


def extend_left(
    env: NDArray[np.complex128], tensor: NDArray[np.complex128], w: NDArray[np.complex128]
) -> NDArray[np.complex128]:
    """Absorb one site into a left environment."""
    return oe.contract("pwa,ptq,wvts,asb->qvb", env, tensor.conj(), w, tensor)


def extend_right(
    env: NDArray[np.complex128], tensor: NDArray[np.complex128], w: NDArray[np.complex128]
) -> NDArray[np.complex128]:
    """Absorb one site into a right environment."""
    return oe.contract("ptq,wvts,asb,qvb->pwa", tensor.conj(), w, tensor, env)


def right_environments(state: MpsState, mpo: HamiltonianMpo) -> list[NDArray[np.complex128] | None]:
    """envs[i] contracts sites i..N-1; envs[N] is trivial."""
    n = state.n_sites
    envs: list[NDArray[np.complex128] | None] = [None] * (n + 1)
    envs[n] = _TRIVIAL_ENV
    for i in range(n - 1, 0, -1):
        envs[i] = extend_right(envs[i + 1], state.tensors[i], mpo.tensors[i])
    return envs


def _one_site_matvec(left, w, right, shape):
    def matvec(x: NDArray[np.complex128]) -> NDArray[np.complex128]:
        out = oe.contract("pwa,wvts,asb,qvb->ptq", left, w, x.reshape(shape), right)
        return out.reshape(-1)

    return matvec


def _two_site_matvec(left, w1, w2, right, shape):
    def matvec(x: NDArray[np.complex128]) -> NDArray[np.complex128]:
        out = oe.contract("pwa,wuts,uvyz,aszb,qvb->ptyq", left, w1, w2, x.reshape(shape), right)
        return out.reshape(-1)

    return matvec


def evolve_one_site(tensor, left, w, right, dt: float, krylov_dim: int):
    """exp(-i dt H_eff) on a single site tensor."""
    matvec = _one_site_matvec(left, w, right, tensor.shape)
    return expm_krylov(matvec, tensor.reshape(-1), dt, krylov_dim).reshape(tensor.shape)


def evolve_two_site(theta, left, w1, w2, right, dt: float, krylov_dim: int):
    """exp(-i dt H_eff) on a merged two-site tensor of shape (l, 2, 2, r)."""
    matvec = _two_site_matvec(left, w1, w2, right, theta.shape)
    return expm_krylov(matvec, theta.reshape(-1), dt, krylov_dim).reshape(theta.shape)


def merge_sites(left: NDArray[np.complex128], right: NDArray[np.complex128]) -> NDArray[np.complex128]:
    return oe.contract("asb,bzc->aszc", left, right)


@dataclass
class TdvpStep:
    """Outcome of one TDVP step.

    Attributes:
        state: The evolved state (the input object, updated in place)
        discarded_weight: Sum of truncated weights over every split
    """

    state: MpsState
    discarded_weight: float


def _split(theta, truncation: TruncationParams, site: int, absorb_right: bool, full_rank: bool):
    l, s1, s2, r = theta.shape
    split = truncated_svd(theta.reshape(l * s1, s2 * r), truncation, site, full_rank=full_rank)
    if absorb_right:
        a = split.u.reshape(l, s1, -1)
        b = (split.s[:, None] * split.vh).reshape(-1, s2, r)
    else:
        a = (split.u * split.s[None, :]).reshape(l, s1, -1)
        b = split.vh.reshape(-1, s2, r)
    return a, b, split.discarded_weight


def tdvp2_step(
    state: MpsState,
    mpo: HamiltonianMpo,
    dt: float,
    krylov_dim: int = 16,
    truncation: TruncationParams | None = None,
) -> TdvpStep:
    """Advance ``state`` by dt with one symmetric two-site sweep.

    The state is brought to center 0 first and ends there. Bonds are capped
    by ``truncation`` or, if not given, by ``state.max_bond``.

    With a non-zero pair coupling every bond is held at min(cap, full
    dimension), zero-weight directions included, so the projected
    Hamiltonian keeps all pair terms and an uncapped sweep is exact up to
    the Krylov error. Without pair terms product states stay product. A
    non-zero ``svd_cutoff`` trims the padding again at every split.

    Raises:
        ValidationError: If the MPO and state sizes differ
        NumericalError: If a local tensor becomes non-finite (reports site)
    """
    n = state.n_sites
    if mpo.n_sites != n:
        raise ValidationError(f"MPO has {mpo.n_sites} sites but the state has {n}")
    truncation = truncation or TruncationParams(max_bond=state.max_bond)
    expand = mpo.pair_coupling != 0.0
    if expand:
        expand_bonds(state, truncation.max_bond)
    else:
        state.move_center(0)
    tensors, ws = state.tensors, mpo.tensors
    half = 0.5 * dt

    if n == 1:
        tensors[0] = evolve_one_site(tensors[0], _TRIVIAL_ENV, ws[0], _TRIVIAL_ENV, dt, krylov_dim)
        _check_finite(tensors[0], 0)
        state.normalize()
        return TdvpStep(state, 0.0)

    right = right_environments(state, mpo)
    left: list[NDArray[np.complex128] | None] = [None] * (n + 1)
    left[0] = _TRIVIAL_ENV
    discarded = 0.0

    for i in range(n - 1):
        theta = evolve_two_site(
            merge_sites(tensors[i], tensors[i + 1]), left[i], ws[i], ws[i + 1], right[i + 2],
            half, krylov_dim,
        )
        tensors[i], tensors[i + 1], weight = _split(
            theta, truncation, i, absorb_right=True, full_rank=expand
        )
        discarded += weight
        left[i + 1] = extend_left(left[i], tensors[i], ws[i])
        if i < n - 2:
            tensors[i + 1] = evolve_one_site(
                tensors[i + 1], left[i + 1], ws[i + 1], right[i + 2], -half, krylov_dim
            )
            _check_finite(tensors[i + 1], i + 1)

    for i in range(n - 2, -1, -1):
        theta = evolve_two_site(
            merge_sites(tensors[i], tensors[i + 1]), left[i], ws[i], ws[i + 1], right[i + 2],
            half, krylov_dim,
        )
        tensors[i], tensors[i + 1], weight = _split(
            theta, truncation, i, absorb_right=False, full_rank=expand
        )
        discarded += weight
        right[i + 1] = extend_right(right[i + 2], tensors[i + 1], ws[i + 1])
        if i > 0:
            tensors[i] = evolve_one_site(
                tensors[i], left[i], ws[i], right[i + 1], -half, krylov_dim
            )
            _check_finite(tensors[i], i)

    state.ortho_center = 0
    state.normalize()
    state.discarded_weight += discarded
    return TdvpStep(state, discarded)


def _check_finite(tensor: NDArray[np.complex128], site: int) -> None:
    if not np.all(np.isfinite(tensor)):
        raise NumericalError("Non-finite MPS tensor during TDVP", site=site)


def mpo_expectation(state: MpsState, mpo: HamiltonianMpo) -> float:
    """<psi|H|psi> for a normalized MPS."""
    env = _TRIVIAL_ENV
    for tensor, w in zip(state.tensors, mpo.tensors, strict=True):
        env = extend_left(env, tensor, w)
    return float(env.reshape(-1)[0].real)
