"""Pytest configuration and fixtures for nuresource tests."""

import numpy as np
import pytest

from nuresource.exact import StateVector
from nuresource.model import CouplingKind, CouplingProfile, SystemSpec


@pytest.fixture
def rng():
    """Seeded random generator."""
    return np.random.default_rng(20240607)


@pytest.fixture
def constant_spec():
    """Four modes, two muon then two electron, constant coupling."""
    return SystemSpec.build(
        "mmee", mixing_angle=0.1, coupling=CouplingProfile(CouplingKind.CONSTANT, mu0=1.0)
    )


@pytest.fixture
def decaying_spec():
    """Six modes with the default power-decay coupling."""
    return SystemSpec.build("mmmeee", mixing_angle=0.1)


@pytest.fixture
def random_state(rng):
    """Factory for normalized random states of n sites."""

    def make(n_sites: int) -> StateVector:
        amplitudes = rng.normal(size=2**n_sites) + 1j * rng.normal(size=2**n_sites)
        return StateVector.from_amplitudes(amplitudes, normalize=True)

    return make


@pytest.fixture
def write_config(tmp_path):
    """Write YAML text to a config file and return its path."""

    def write(text: str, name: str = "run.yaml"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write


@pytest.fixture
def tiny_config_text(tmp_path):
    """A seconds-scale run configuration writing under tmp_path."""
    return f"""
system.initial_config: mmee
coupling.kind: constant
coupling.mu0: 1.0
evolution.dt: 0.05
evolution.t_final: 1.0
evolution.snapshot_every: 5
engine: both
bond_caps: [4]
output.directory: {tmp_path / "results"}
output.run_name: tiny
output.arc_points: 16
"""
