"""Time evolution of matrix product states on the uniform step grid."""

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

from nuresource.core.exceptions import ValidationError
from nuresource.exact.evolution import EvolutionParams
from nuresource.model.system import SystemSpec, coupling_at
from nuresource.mps.mpo import build_mpo
from nuresource.mps.state import MpsState, TruncationParams, max_bond_dimension
from nuresource.mps.tdvp import tdvp2_step

logger = logging.getLogger(__name__)

MpsCallback = Callable[[float, int, MpsState], None]


@dataclass
class MpsTrajectory:
    """Result of an MPS run.

    Attributes:
        times: Snapshot times
        final_state: State at t_final
        discarded_weight: Truncation weight accumulated over the run
        max_bond_seen: Largest Schmidt rank at any snapshot
        steps: Number of TDVP steps
    """

    times: list[float] = field(default_factory=list)
    final_state: MpsState | None = None
    discarded_weight: float = 0.0
    max_bond_seen: int = 1
    steps: int = 0


def evolve_mps(
    state: MpsState,
    spec: SystemSpec,
    params: EvolutionParams,
    callbacks: Sequence[MpsCallback] = (),
    truncation: TruncationParams | None = None,
) -> MpsTrajectory:
    """Evolve an MPS from t = 0 to params.t_final with two-site TDVP.

    The MPO is built once; only its pair channel is rescaled to mu at each
    step midpoint. The input state is evolved in place. Callbacks receive
    the live state and must not keep it without copying.

    Raises:
        NumericalError: If a TDVP step fails
    """
    if state.n_sites != spec.n_sites:
        raise ValidationError(f"State has {state.n_sites} sites but the system has {spec.n_sites}")
    truncation = truncation or TruncationParams(max_bond=state.max_bond)
    mpo = build_mpo(spec, 0.0)
    n_steps = params.n_steps
    h = params.step_size
    trajectory = MpsTrajectory()

    def snapshot(t: float, step: int) -> None:
        trajectory.times.append(t)
        for callback in callbacks:
            callback(t, step, state)
        bond = max_bond_dimension(state)
        trajectory.max_bond_seen = max(trajectory.max_bond_seen, bond)
        logger.debug(
            "MPS snapshot step=%d t=%.6f max_bond=%d discarded=%.3e",
            step, t, bond, state.discarded_weight,
        )

    snapshot(0.0, 0)
    for step in range(1, n_steps + 1):
        mpo.set_pair_coupling(0.5 * coupling_at(spec.coupling, (step - 0.5) * h))
        result = tdvp2_step(state, mpo, h, params.krylov_dim, truncation)
        trajectory.discarded_weight += result.discarded_weight
        if step % params.snapshot_every == 0 or step == n_steps:
            snapshot(step * h, step)

    trajectory.final_state = state
    trajectory.steps = n_steps
    return trajectory
