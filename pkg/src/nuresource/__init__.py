"""nuresource - quantum resources in collective neutrino oscillations.

Evolves two-flavor N-neutrino systems with an exact state-vector engine and a
truncated matrix-product-state engine, and measures entanglement entropy,
stabilizer Renyi entropy, non-local magic bounds and antiflatness next to
polarization, survival probabilities and spectral splits.
"""

from nuresource.core.config import Engine, Measure, RunConfig, validate_config
from nuresource.core.result import (
    AsymptoticRow,
    DiffRow,
    EngineResult,
    GlobalRecord,
    RunManifest,
    RunResult,
)
from nuresource.core.runner import ExperimentRunner, run, sweep_bond_dims
from nuresource.model import SystemSpec
from nuresource.version import __version__

__all__ = [
    # Configuration
    "Engine",
    "Measure",
    "RunConfig",
    "validate_config",
    # Running
    "ExperimentRunner",
    "run",
    "sweep_bond_dims",
    # Results
    "AsymptoticRow",
    "DiffRow",
    "EngineResult",
    "GlobalRecord",
    "RunManifest",
    "RunResult",
    # Model
    "SystemSpec",
    # Version
    "__version__",
]
