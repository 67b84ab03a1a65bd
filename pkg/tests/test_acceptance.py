"""End-to-end checks on the committed experiment configurations.

These runs take minutes; deselect them with ``-m 'not slow'``.
"""

from pathlib import Path

import numpy as np
import pytest

from nuresource.core.config import Engine, RunConfig, validate_config
from nuresource.core.runner import run, sweep_bond_dims
from nuresource.resources import arc_maximum, sample_arc

EXPERIMENTS = Path(__file__).resolve().parent.parent / "experiments"


@pytest.fixture
def scratch(monkeypatch, tmp_path):
    """Send run outputs to tmp_path."""
    monkeypatch.setenv("NURESOURCE_OUTPUT_DIR", str(tmp_path))
    return tmp_path


def test_experiment_configs_are_valid():
    paths = sorted(EXPERIMENTS.glob("*.yaml"))
    sizes = set()
    for path in paths:
        config = RunConfig.from_file(path)
        # file names start with n<N>_
        assert path.stem.split("_")[0] == f"n{config.n_sites}", path.name
        sizes.add(config.n_sites)
    assert sizes == {8, 10, 12, 14}


def test_arc_extrema():
    lambda0, peak = arc_maximum()
    assert lambda0 == pytest.approx(np.sqrt(2) / 4 + 0.5, abs=1e-8)
    assert peak == pytest.approx(np.log(4 / 3), abs=1e-10)
    first = sample_arc(2)[0]
    assert first[2] == pytest.approx(np.log(2), abs=1e-12)


def test_rerun_is_byte_identical(scratch):
    config = validate_config("""
system.initial_config: mmmeee
evolution.dt: 0.05
evolution.t_final: 2.0
evolution.snapshot_every: 10
engine: both
bond_caps: [4]
output.run_name: determinism
""")
    first = run(config)
    tables = sorted(p.name for p in first.output_dir.glob("*.csv"))
    before = {name: (first.output_dir / name).read_bytes() for name in tables}
    second = run(config)
    assert second.output_dir == first.output_dir
    for name in tables:
        assert (second.output_dir / name).read_bytes() == before[name], name


@pytest.mark.slow
class TestOracleEquivalence:
    """MPS at the exact bond bound against the state-vector engine, N=8."""

    @pytest.fixture(scope="class")
    def result(self, tmp_path_factory):
        config = RunConfig.from_file(EXPERIMENTS / "n8_4mu4e_oracle.yaml")
        output = config.output.model_copy(
            update={"directory": str(tmp_path_factory.mktemp("oracle"))}
        )
        return run(config.model_copy(update={"output": output}))

    def test_fidelity_at_every_snapshot(self, result):
        fidelities = [g.fidelity for g in result.engine("mps-chi16").global_records]
        assert len(fidelities) == 51
        assert min(fidelities) >= 1 - 1e-6

    def test_resources_agree(self, result):
        exact = result.engine("exact").records
        mps = result.engine("mps-chi16").records
        for a, b in zip(exact, mps, strict=True):
            assert (a.time, a.mode) == (b.time, b.mode)
            assert b.entropy == pytest.approx(a.entropy, abs=1e-6)
            assert b.nl_sre2 == pytest.approx(a.nl_sre2, abs=1e-6)

    def test_bond_ceiling(self, result):
        assert max(g.max_bond for g in result.engine("mps-chi16").global_records) <= 16

    def test_conservation(self, result):
        records = result.engine("exact").global_records
        assert max(abs(g.norm - 1.0) for g in records) <= 1e-10
        jz = [g.mass_jz for g in records]
        assert max(jz) - min(jz) <= 1e-8

    def test_mirror_pairs(self, result):
        for label in ("exact", "mps-chi16"):
            assert result.engine(label).symmetry.max_delta <= 1e-5


@pytest.mark.slow
def test_constant_coupling_energy_drift(scratch):
    config = validate_config("""
system.initial_config: mmmmeeee
coupling.kind: constant
coupling.mu0: 5.0
evolution.t_final: 20.0
evolution.snapshot_every: 200
measures: [entropy, polarization]
output.run_name: energy
""")
    records = run(config).engine("exact").global_records
    energies = np.array([g.energy for g in records])
    assert np.max(np.abs(energies - energies[0])) <= 1e-9 * abs(energies[0])


def _from_experiment(name: str, directory: Path, **evolution) -> RunConfig:
    config = RunConfig.from_file(EXPERIMENTS / name)
    output = config.output.model_copy(update={"directory": str(directory)})
    update: dict = {"output": output}
    if evolution:
        update["evolution"] = config.evolution.model_copy(update=evolution)
    return config.model_copy(update=update)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["n12_3mu9e_bulb.yaml", "n12_6mu6e_bulb.yaml"])
def test_strong_splits_colocate_with_resources(tmp_path, name):
    eng = run(_from_experiment(name, tmp_path)).engine("exact")
    assert eng.splits is not None
    assert eng.splits.strong
    assert len(eng.colocation) == len(eng.splits.strong)
    for row in eng.colocation:
        assert row.colocated, row.to_dict()
    assert all(row.stationary for row in eng.asymptotic)


@pytest.mark.slow
class TestTwelveModeSweep:
    """6 muon + 6 electron modes, exact reference and caps 64, 48, 36."""

    @pytest.fixture(scope="class")
    def result(self, tmp_path_factory):
        config = _from_experiment(
            "n12_6mu6e_sweep.yaml", tmp_path_factory.mktemp("sweep"), t_final=20.0
        )
        return sweep_bond_dims(config)

    def test_engines(self, result):
        assert [e.label for e in result.engines] == ["exact", "mps-chi64", "mps-chi48", "mps-chi36"]

    def test_caps_are_respected(self, result):
        for cap in (64, 48, 36):
            records = result.engine(f"mps-chi{cap}").global_records
            assert max(g.max_bond for g in records) <= cap

    def test_diff_table(self, result):
        assert {(d.cap_from, d.cap_to) for d in result.diffs} == {(64, 48), (48, 36)}
        assert len(result.diffs) == 2 * 12
        assert {d.region for d in result.diffs} <= {"low_entanglement", "high_entanglement"}

    def test_mirror_pairs(self, result):
        assert result.engine("exact").symmetry.max_delta <= 1e-5

    def test_uncapped_bond_stays_at_exact_bound(self, tmp_path):
        config = _from_experiment("n12_6mu6e_sweep.yaml", tmp_path, t_final=5.0)
        config = config.model_copy(update={"engine": Engine.MPS, "bond_caps": []})
        records = run(config).engine("mps-chi64").global_records
        assert max(g.max_bond for g in records) <= 64
