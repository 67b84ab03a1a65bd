"""Bond-5 matrix product operator of the all-to-all collective Hamiltonian.

Finite-state-machine channels: 0 = nothing placed yet, 1..3 = a sigma_x,
sigma_y or sigma_z waiting for its partner, 4 = Hamiltonian complete.
Every site tensor W[a, b, s_out, s_in] carries

    W[0, 0] = I, W[0, k] = sigma_k, W[0, 4] = h_i,
    W[k, k] = I, W[k, 4] = c sigma_k, W[4, 4] = I,

with c the pair coupling. The first site keeps row 0, the last column 4.
"""

from dataclasses import dataclass

import numpy as np
import opt_einsum as oe
from numpy.typing import NDArray

from nuresource.model.hamiltonian import (
    IDENTITY,
    PAULIS,
    HamiltonianTerms,
    hamiltonian_terms,
)
from nuresource.model.system import Basis, SystemSpec
from nuresource.utils.validation import check_capacity

MPO_BOND = 5
START, DONE = 0, MPO_BOND - 1

# dense contraction is only meant for oracle checks
MAX_DENSE_MPO_SITES = 12


def _bulk_tensor(h: NDArray[np.complex128], coupling: float) -> NDArray[np.complex128]:
    w = np.zeros((MPO_BOND, MPO_BOND, 2, 2), dtype=np.complex128)
    w[START, START] = IDENTITY
    w[DONE, DONE] = IDENTITY
    w[START, DONE] = h
    for k, sigma in enumerate(PAULIS, start=1):
        w[START, k] = sigma
        w[k, k] = IDENTITY
        w[k, DONE] = coupling * sigma
    return w


@dataclass
class HamiltonianMpo:
    """MPO tensors of shape (left, right, s_out, s_in) and the pair factor.

    Attributes:
        tensors: One rank-4 tensor per site
        pair_coupling: Factor c in front of sum_{i<j} sigma_i . sigma_j
    """

    tensors: list[NDArray[np.complex128]]
    pair_coupling: float

    @property
    def n_sites(self) -> int:
        return len(self.tensors)

    @property
    def bond_dimension(self) -> int:
        return MPO_BOND if self.n_sites > 1 else 1

    def set_pair_coupling(self, coupling: float) -> None:
        """Rescale the pair channel in place; one-body entries are untouched."""
        for w in self.tensors:
            if w.shape[0] == 1:
                continue
            # the last site keeps only the DONE column
            done = w.shape[1] - 1
            for k, sigma in enumerate(PAULIS, start=1):
                w[k, done] = coupling * sigma
        self.pair_coupling = coupling

    def to_dense(self) -> NDArray[np.complex128]:
        """Contract to the full 2^N x 2^N matrix.

        Raises:
            CapacityError: If N exceeds MAX_DENSE_MPO_SITES
        """
        check_capacity("Dense MPO contraction", self.n_sites, MAX_DENSE_MPO_SITES)
        # block[b, out, in] accumulates the sites contracted so far
        block = self.tensors[0][0]
        for w in self.tensors[1:]:
            block = oe.contract("aij,abst->bisjt", block, w)
            right, d_out, _, d_in, _ = block.shape
            block = block.reshape(right, d_out * 2, d_in * 2)
        return block[0]


def mpo_from_terms(terms: HamiltonianTerms) -> HamiltonianMpo:
    """Build the MPO for explicit one-body terms and pair coupling."""
    n_sites = terms.n_sites
    if n_sites == 1:
        return HamiltonianMpo([terms.one_body[0].reshape(1, 1, 2, 2).copy()], terms.pair_coupling)

    tensors = []
    for site, h in enumerate(terms.one_body):
        w = _bulk_tensor(h, terms.pair_coupling)
        if site == 0:
            w = w[START : START + 1]
        elif site == n_sites - 1:
            w = w[:, DONE : DONE + 1]
        tensors.append(np.ascontiguousarray(w))
    return HamiltonianMpo(tensors, terms.pair_coupling)


def build_mpo(spec: SystemSpec, t: float, basis: Basis = Basis.FLAVOR) -> HamiltonianMpo:
    """MPO of H(t) with the pair channel weighted mu(t) / 2."""
    return mpo_from_terms(hamiltonian_terms(spec, t, basis))
