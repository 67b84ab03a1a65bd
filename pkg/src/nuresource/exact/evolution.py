"""State-vector time evolution under the collective Hamiltonian.

The Hamiltonian acts matrix-free on flat amplitude vectors through
precomputed index tables: one bit-flip table per site for the one-body
terms and one bit-exchange table per pair for sigma_i . sigma_j = 2 SWAP_ij - 1.
Within a step the coupling is frozen at the step midpoint.
"""

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.sparse.linalg as spla
from numpy.typing import NDArray

from nuresource.core.exceptions import NumericalError, ValidationError
from nuresource.exact.state import StateVector
from nuresource.model.hamiltonian import (
    MAX_DENSE_SITES,
    HamiltonianTerms,
    build_one_body,
    hamiltonian_terms,
    one_body_matrix,
    pair_exchange_matrix,
    total_mass_jz,
)
from nuresource.model.system import Basis, SystemSpec, coupling_at
from nuresource.utils.krylov import expm_krylov
from nuresource.utils.validation import check_capacity

logger = logging.getLogger(__name__)

# Callback signature: (time, step, state)
Callback = Callable[[float, int, StateVector], None]


class IntegratorMethod(Enum):
    """Single-step propagators for the state-vector engine."""

    KRYLOV = "krylov_step"
    MATRIX_EXPONENTIAL = "matrix_exponential_step"
    RK4 = "rk4"


@dataclass(frozen=True)
class EvolutionParams:
    """Time-stepping parameters shared by both engines.

    Attributes:
        dt: Nominal step size; shrunk so that an integer number of steps
            lands exactly on t_final
        t_final: End time of the run (start is t = 0)
        method: Single-step propagator
        krylov_dim: Krylov subspace size for the Lanczos exponential
        snapshot_every: Steps between measurement callbacks
        energy_tolerance: Relative per-step energy drift above which a step
            is redone as two half steps
        adaptive: Enable automatic step halving
        max_halvings: Recursion limit for step halving
        keep_states: Keep snapshot states in the returned trajectory
    """

    dt: float = 0.01
    t_final: float = 500.0
    method: IntegratorMethod = IntegratorMethod.KRYLOV
    krylov_dim: int = 16
    snapshot_every: int = 100
    energy_tolerance: float = 1e-9
    adaptive: bool = True
    max_halvings: int = 6
    keep_states: bool = False

    def __post_init__(self):
        if not isinstance(self.method, IntegratorMethod):
            object.__setattr__(self, "method", IntegratorMethod(self.method))
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValidationError(f"dt must be positive, got {self.dt}")
        if not (math.isfinite(self.t_final) and self.t_final >= 0):
            raise ValidationError(f"t_final must be non-negative, got {self.t_final}")
        if self.krylov_dim < 4:
            raise ValidationError(f"krylov_dim must be at least 4, got {self.krylov_dim}")
        if self.snapshot_every < 1:
            raise ValidationError(f"snapshot_every must be at least 1, got {self.snapshot_every}")
        if not self.energy_tolerance > 0:
            raise ValidationError(
                f"energy_tolerance must be positive, got {self.energy_tolerance}"
            )
        if self.max_halvings < 0:
            raise ValidationError(f"max_halvings cannot be negative, got {self.max_halvings}")

    @property
    def n_steps(self) -> int:
        return steps_for(self.t_final, self.dt)

    @property
    def step_size(self) -> float:
        """Actual step size used on the uniform grid."""
        n = self.n_steps
        return self.t_final / n if n else self.dt


def steps_for(duration: float, dt: float) -> int:
    """Number of uniform steps of size at most dt covering ``duration``."""
    duration = abs(duration)
    if duration == 0.0:
        return 0
    return max(1, math.ceil(duration / dt - 1e-9))


class MatrixFreeHamiltonian:
    """Action of sum_i h_i + c sum_{i<j} sigma_i . sigma_j on flat vectors.

    Index tables depend only on N and are built once; ``set_terms`` swaps in
    new coefficients without rebuilding them.
    """

    def __init__(self, n_sites: int):
        check_capacity("State-vector engine", n_sites, MAX_DENSE_SITES, "use the MPS engine")
        self.n_sites = n_sites
        dim = 2**n_sites
        index = np.arange(dim, dtype=np.int64)
        masks = np.array([1 << (n_sites - 1 - i) for i in range(n_sites)], dtype=np.int64)

        # z[i, b] = +1 when site i of basis state b is up (electron), else -1
        bits = (index[None, :] & masks[:, None]) != 0
        self._z = np.where(bits, -1.0, 1.0)
        self._flips = index[None, :] ^ masks[:, None]

        pairs = [(i, j) for i in range(n_sites) for j in range(i + 1, n_sites)]
        self.n_pairs = len(pairs)
        if pairs:
            self._swaps = np.stack(
                [index ^ ((bits[i] != bits[j]) * (masks[i] | masks[j])) for i, j in pairs]
            )
        else:
            self._swaps = np.empty((0, dim), dtype=np.int64)

        self._diagonal = np.zeros(dim, dtype=np.complex128)
        self._offdiagonal = np.zeros((n_sites, dim), dtype=np.complex128)
        self.pair_coupling = 0.0

    @classmethod
    def from_terms(cls, terms: HamiltonianTerms) -> "MatrixFreeHamiltonian":
        hamiltonian = cls(terms.n_sites)
        hamiltonian.set_terms(terms)
        return hamiltonian

    def set_terms(self, terms: HamiltonianTerms) -> None:
        if terms.n_sites != self.n_sites:
            raise ValidationError(
                f"Terms for {terms.n_sites} sites given to a {self.n_sites}-site Hamiltonian"
            )
        self.set_one_body(terms.one_body)
        self.pair_coupling = terms.pair_coupling

    def set_one_body(self, one_body: Sequence[NDArray[np.complex128]]) -> None:
        """Decompose each h_i into Pauli components and tabulate them."""
        self._diagonal[:] = 0.0
        for i, h in enumerate(one_body):
            h0 = 0.5 * (h[0, 0] + h[1, 1])
            hz = 0.5 * (h[0, 0] - h[1, 1])
            hx = h[0, 1].real
            hy = -h[0, 1].imag
            self._diagonal += h0 + hz * self._z[i]
            # sigma_y flips site i with phase -i z_i(b)
            self._offdiagonal[i] = hx - 1j * hy * self._z[i]

    def matvec(self, psi: NDArray[np.complex128]) -> NDArray[np.complex128]:
        out = self._diagonal * psi
        out += np.sum(self._offdiagonal * psi[self._flips], axis=0)
        if self.n_pairs and self.pair_coupling != 0.0:
            exchanged = np.sum(psi[self._swaps], axis=0)
            out += self.pair_coupling * (2.0 * exchanged - self.n_pairs * psi)
        return out

    __call__ = matvec

    def expectation(self, psi: NDArray[np.complex128]) -> float:
        return float(np.vdot(psi, self.matvec(psi)).real)


def apply_terms(amplitudes: NDArray[np.complex128], terms: HamiltonianTerms) -> NDArray[np.complex128]:
    """H|psi> for explicitly given terms."""
    amplitudes = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    if amplitudes.size != 2**terms.n_sites:
        raise ValidationError(
            f"State has {amplitudes.size} amplitudes, Hamiltonian acts on {2**terms.n_sites}"
        )
    return MatrixFreeHamiltonian.from_terms(terms).matvec(amplitudes)


def apply_hamiltonian(
    state: StateVector, spec: SystemSpec, t: float, basis: Basis = Basis.FLAVOR
) -> StateVector:
    """H(t)|psi> without materializing the 2^N x 2^N matrix.

    Raises:
        ValidationError: If the state and system sizes differ
    """
    if state.n_sites != spec.n_sites:
        raise ValidationError(
            f"State has {state.n_sites} sites but the system has {spec.n_sites}"
        )
    terms = hamiltonian_terms(spec, t, basis)
    return StateVector(apply_terms(state.amplitudes, terms), state.n_sites)


def energy(state: StateVector, spec: SystemSpec, t: float) -> float:
    """<psi|H(t)|psi> in the flavor basis."""
    return float(np.vdot(state.amplitudes, apply_hamiltonian(state, spec, t).amplitudes).real)


def mass_jz_expectation(state: StateVector, spec: SystemSpec) -> float:
    """<sum_i sigma_z^(mass, i) / 2>, conserved by every H(t)."""
    return float(np.vdot(state.amplitudes, total_mass_jz(spec) @ state.amplitudes).real)


@dataclass
class Trajectory:
    """Result of a state-vector run.

    Attributes:
        times: Snapshot times
        states: Snapshot states (empty unless keep_states was set)
        final_state: State at t_final
        steps: Number of grid steps taken
        halvings: Number of steps that were subdivided
    """

    times: list[float] = field(default_factory=list)
    states: list[StateVector] = field(default_factory=list)
    final_state: StateVector | None = None
    steps: int = 0
    halvings: int = 0


class _Stepper:
    """One propagator bound to a system; advances a vector by one grid step."""

    def __init__(self, spec: SystemSpec, params: EvolutionParams):
        self.spec = spec
        self.params = params
        self.one_body = build_one_body(spec, Basis.FLAVOR)
        self.hamiltonian = MatrixFreeHamiltonian(spec.n_sites)
        self.hamiltonian.set_one_body(self.one_body)
        self.subdivisions = 0

        self._one_body_sparse = None
        self._pair_sparse = None
        if params.method is IntegratorMethod.MATRIX_EXPONENTIAL:
            self._one_body_sparse = one_body_matrix(self.one_body)
            if spec.n_sites > 1:
                self._pair_sparse = pair_exchange_matrix(spec.n_sites)

    def advance(self, psi: NDArray[np.complex128], t0: float, h: float, depth: int = 0):
        """Propagate from t0 to t0 + h, halving the step while energy drifts."""
        self.hamiltonian.pair_coupling = 0.5 * coupling_at(self.spec.coupling, t0 + 0.5 * h)
        new = self._single(psi, h)
        if not self.params.adaptive or depth >= self.params.max_halvings:
            return new

        before = self.hamiltonian.expectation(psi)
        after = self.hamiltonian.expectation(new)
        drift = abs(after - before) / max(abs(before), 1.0)
        if drift <= self.params.energy_tolerance:
            return new

        self.subdivisions += 1
        logger.debug(
            "Energy drift %.3e at t=%.6f exceeds %.1e, halving step to %.3e",
            drift, t0, self.params.energy_tolerance, h / 2,
        )
        half = self.advance(psi, t0, 0.5 * h, depth + 1)
        return self.advance(half, t0 + 0.5 * h, 0.5 * h, depth + 1)

    def _single(self, psi: NDArray[np.complex128], h: float) -> NDArray[np.complex128]:
        method = self.params.method
        matvec = self.hamiltonian.matvec
        if method is IntegratorMethod.KRYLOV:
            return expm_krylov(matvec, psi, h, self.params.krylov_dim)
        if method is IntegratorMethod.MATRIX_EXPONENTIAL:
            matrix = self._one_body_sparse
            if self._pair_sparse is not None:
                matrix = matrix + self.hamiltonian.pair_coupling * self._pair_sparse
            return spla.expm_multiply(-1j * h * matrix, psi)

        k1 = -1j * matvec(psi)
        k2 = -1j * matvec(psi + 0.5 * h * k1)
        k3 = -1j * matvec(psi + 0.5 * h * k2)
        k4 = -1j * matvec(psi + h * k3)
        return psi + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def _check_finite(psi: NDArray[np.complex128], step: int) -> None:
    if not np.all(np.isfinite(psi)):
        raise NumericalError("Non-finite amplitudes in state-vector evolution", step=step)


def _check_state(state: StateVector, spec: SystemSpec) -> None:
    check_capacity("State-vector engine", spec.n_sites, MAX_DENSE_SITES, "use the MPS engine")
    if state.n_sites != spec.n_sites:
        raise ValidationError(
            f"State has {state.n_sites} sites but the system has {spec.n_sites}"
        )


def evolve_exact(
    state: StateVector,
    spec: SystemSpec,
    params: EvolutionParams,
    callbacks: Sequence[Callback] = (),
) -> Trajectory:
    """Evolve a state from t = 0 to params.t_final.

    Callbacks run at t = 0, every ``snapshot_every`` steps and at the final
    step.

    Raises:
        CapacityError: If N exceeds the state-vector limit
        NumericalError: If amplitudes become non-finite
    """
    _check_state(state, spec)
    stepper = _Stepper(spec, params)
    n_steps = params.n_steps
    h = params.step_size
    trajectory = Trajectory()

    def snapshot(t: float, step: int, psi: NDArray[np.complex128]) -> None:
        current = StateVector(psi.copy(), spec.n_sites)
        trajectory.times.append(t)
        if params.keep_states:
            trajectory.states.append(current)
        for callback in callbacks:
            callback(t, step, current)
        logger.debug("Snapshot step=%d t=%.6f norm=%.15f", step, t, np.linalg.norm(psi))

    psi = state.amplitudes.copy()
    snapshot(0.0, 0, psi)
    for step in range(1, n_steps + 1):
        t0 = (step - 1) * h
        psi = stepper.advance(psi, t0, h)
        _check_finite(psi, step)
        if step % params.snapshot_every == 0 or step == n_steps:
            snapshot(step * h, step, psi)

    trajectory.final_state = StateVector(psi, spec.n_sites)
    trajectory.steps = n_steps
    trajectory.halvings = stepper.subdivisions
    if stepper.subdivisions:
        logger.warning(
            "%d of %d steps were subdivided to meet energy tolerance %.1e",
            stepper.subdivisions, n_steps, params.energy_tolerance,
        )
    return trajectory


def propagate(
    state: StateVector,
    spec: SystemSpec,
    t_start: float,
    t_stop: float,
    params: EvolutionParams,
) -> StateVector:
    """Propagate from t_start to t_stop, which may lie before t_start.

    Steps use the midpoints of a uniform grid between the two times, so a
    backward call retraces a forward call on the same interval step by step.
    """
    _check_state(state, spec)
    if t_start < 0 or t_stop < 0:
        raise ValidationError(f"Times must be non-negative, got {t_start} -> {t_stop}")
    n_steps = steps_for(t_stop - t_start, params.dt)
    psi = state.amplitudes.copy()
    if n_steps == 0:
        return StateVector(psi, spec.n_sites)

    stepper = _Stepper(spec, params)
    h = (t_stop - t_start) / n_steps
    for step in range(1, n_steps + 1):
        psi = stepper.advance(psi, t_start + (step - 1) * h, h)
        _check_finite(psi, step)
    return StateVector(psi, spec.n_sites)
