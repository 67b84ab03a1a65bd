"""Tests for run configuration loading and validation."""

import pytest

from nuresource.core.config import (
    ALL_MEASURES,
    Engine,
    Measure,
    RunConfig,
    flatten,
    validate_config,
)
from nuresource.core.exceptions import CapacityError, ConfigurationError
from nuresource.exact import IntegratorMethod
from nuresource.model import CouplingKind, Flavor


class TestDefaults:
    """Tests for default values."""

    def test_minimal_config(self):
        config = validate_config("system.initial_config: mmeeee")
        assert config.n_sites == 6
        assert config.engine is Engine.EXACT
        assert config.coupling.kind is CouplingKind.POWER_DECAY
        assert config.coupling.mu0 == 5.0
        assert config.evolution.dt == 0.01
        assert config.evolution.t_final == 500.0
        assert config.evolution.method is IntegratorMethod.KRYLOV
        assert config.measures == list(ALL_MEASURES)
        assert config.output.format == "csv"

    def test_default_omegas(self):
        config = validate_config("system.initial_config: mee\nsystem.omega0: 0.5")
        assert config.omegas == (0.5, 1.0, 1.5)

    @pytest.mark.parametrize("config_string,expected", [("mmee", 4), ("mmmeee", 8), ("me" * 5, 32)])
    def test_max_bond_default(self, config_string, expected):
        assert validate_config(f"system.initial_config: {config_string}").max_bond == expected

    def test_explicit_max_bond(self):
        config = validate_config("system.initial_config: mmee\nmps.max_bond: 3")
        assert config.max_bond == 3
        assert config.truncation().max_bond == 3
        assert config.truncation(cap=2).max_bond == 2

    def test_engine_flags(self):
        assert Engine.BOTH.uses_exact and Engine.BOTH.uses_mps
        assert not Engine.MPS.uses_exact
        assert not Engine.EXACT.uses_mps


class TestKeyStyles:
    """Tests for flat and nested keys."""

    def test_nested_equals_flat(self):
        flat = validate_config("system.initial_config: mmee\ncoupling.mu0: 2.0\nengine: mps")
        nested = validate_config(
            "system:\n  initial_config: mmee\ncoupling:\n  mu0: 2.0\nengine: mps\n"
        )
        assert flat == nested
        assert flat.config_hash() == nested.config_hash()

    def test_label_list(self):
        config = validate_config("system.initial_config: [mu, mu, e, e]")
        assert config.flavors == (Flavor.MUON, Flavor.MUON, Flavor.ELECTRON, Flavor.ELECTRON)

    def test_duplicate_key(self):
        text = "system.initial_config: mmee\nsystem:\n  initial_config: me\n"
        with pytest.raises(ConfigurationError) as exc_info:
            validate_config(text)
        assert any("given more than once" in e for e in exc_info.value.errors)

    def test_flatten(self):
        assert flatten({"a": {"b": 1, "c": {"d": 2}}, "e": 3}) == {"a.b": 1, "a.c.d": 2, "e": 3}


class TestErrors:
    """Tests for aggregated configuration errors."""

    def test_every_violation_is_reported(self):
        text = """
system.initial_config: mmee
evolution.dt: -0.1
coupling.mu0: -2
output.format: xml
colour: blue
"""
        with pytest.raises(ConfigurationError) as exc_info:
            validate_config(text)
        errors = exc_info.value.errors
        assert len(errors) == 4
        assert any(e.startswith("evolution.dt") for e in errors)
        assert any(e.startswith("coupling.mu0") for e in errors)
        assert any(e.startswith("output.format") for e in errors)
        assert "colour: unknown key" in errors

    def test_missing_system(self):
        with pytest.raises(ConfigurationError) as exc_info:
            validate_config("engine: exact")
        assert any(e.startswith("system") for e in exc_info.value.errors)

    def test_omegas_report_indices(self):
        with pytest.raises(ConfigurationError) as exc_info:
            validate_config("system.initial_config: mmee\nsystem.omegas: [1, 2, 2, 3]")
        (error,) = exc_info.value.errors
        assert "strictly increasing" in error
        assert "1->2" in error

    def test_system_checks_run_alongside_field_errors(self):
        text = "system.initial_config: me\nsystem.omegas: [2, 1]\ncoupling.mu0: -1"
        with pytest.raises(ConfigurationError) as exc_info:
            validate_config(text)
        errors = exc_info.value.errors
        assert len(errors) == 2
        assert any(e.startswith("coupling.mu0") for e in errors)
        assert any("strictly increasing" in e for e in errors)

    def test_start_radius_inside_radius(self):
        with pytest.raises(ConfigurationError, match="start_radius"):
            validate_config(
                "system.initial_config: me\ncoupling.radius: 30\ncoupling.start_radius: 10"
            )

    def test_omegas_length(self):
        with pytest.raises(ConfigurationError, match="expected 4 values"):
            validate_config("system.initial_config: mmee\nsystem.omegas: [1, 2, 3]")

    def test_n_sites_mismatch(self):
        with pytest.raises(ConfigurationError, match="does not match"):
            validate_config("system.initial_config: mmee\nsystem.n_sites: 5")

    def test_single_mode_rejected(self):
        with pytest.raises(ConfigurationError, match="at least 2 modes"):
            validate_config("system.initial_config: e")

    def test_unknown_flavor(self):
        with pytest.raises(ConfigurationError, match="initial_config"):
            validate_config("system.initial_config: mmxe")

    def test_unknown_measure(self):
        with pytest.raises(ConfigurationError, match="measures"):
            validate_config("system.initial_config: me\nmeasures: [entropy, concurrence]")

    def test_empty_measures(self):
        with pytest.raises(ConfigurationError, match="at least one measure"):
            validate_config("system.initial_config: me\nmeasures: []")

    def test_bad_bond_cap(self):
        with pytest.raises(ConfigurationError, match="bond caps"):
            validate_config("system.initial_config: me\nbond_caps: [4, 0]")

    def test_invalid_yaml(self):
        with pytest.raises(ConfigurationError, match="Invalid YAML"):
            validate_config("system: [unclosed")

    def test_not_a_mapping(self):
        with pytest.raises(ConfigurationError, match="mapping"):
            validate_config("- a\n- b")

    def test_errors_exit_code(self):
        with pytest.raises(ConfigurationError) as exc_info:
            validate_config("engine: quantum")
        assert exc_info.value.exit_code == 2


class TestCapacity:
    """Tests for engine size limits."""

    def test_exact_engine_limit(self):
        with pytest.raises(CapacityError) as exc_info:
            validate_config("system.initial_config: " + "m" * 7 + "e" * 8)
        assert exc_info.value.limit == 14
        assert exc_info.value.requested == 15
        assert exc_info.value.exit_code == 3

    def test_mps_engine_has_no_dense_limit(self):
        config = validate_config(
            "system.initial_config: " + "m" * 10 + "e" * 10
            + "\nengine: mps\nmeasures: [entropy, nl_sre2]"
        )
        assert config.n_sites == 20

    def test_full_sre_limit(self):
        with pytest.raises(CapacityError, match="full_sre"):
            validate_config("system.initial_config: " + "m" * 5 + "e" * 6)

    def test_full_sre_can_be_dropped(self):
        config = validate_config(
            "system.initial_config: " + "m" * 5 + "e" * 6 + "\nmeasures: [entropy, polarization]"
        )
        assert not config.wants(Measure.FULL_SRE)
        assert config.wants(Measure.ENTROPY)

    def test_structural_errors_come_first(self):
        with pytest.raises(ConfigurationError):
            validate_config("system.initial_config: " + "e" * 15 + "\nevolution.dt: 0")


class TestResolved:
    """Tests for the resolved configuration and its hash."""

    def test_resolved_injects_defaults(self):
        resolved = validate_config("system.initial_config: [m, m, e, e]").resolved()
        assert resolved["system.initial_config"] == "mmee"
        assert resolved["system.n_sites"] == 4
        assert resolved["system.omegas"] == [1.0, 2.0, 3.0, 4.0]
        assert resolved["mps.max_bond"] == 4
        assert resolved["coupling.kind"] == "power_decay"
        assert resolved["engine"] == "exact"

    def test_round_trip_keeps_hash(self):
        config = validate_config(
            "system.initial_config: mmmeee\nengine: both\nbond_caps: [8, 4]\ncoupling.mu0: 3"
        )
        again = validate_config(config.to_yaml())
        assert again.config_hash() == config.config_hash()
        assert len(config.config_hash()) == 64

    def test_hash_changes_with_content(self):
        a = validate_config("system.initial_config: mmee")
        b = validate_config("system.initial_config: mmee\ncoupling.mu0: 4.0")
        assert a.config_hash() != b.config_hash()

    def test_evolution_params(self):
        config = validate_config("system.initial_config: me\nevolution.dt: 0.5\nevolution.t_final: 2")
        params = config.evolution_params(keep_states=True)
        assert params.dt == 0.5
        assert params.keep_states

    def test_system_spec(self):
        spec = validate_config("system.initial_config: me\ncoupling.kind: constant").to_system_spec()
        assert spec.n_sites == 2
        assert spec.coupling.kind is CouplingKind.CONSTANT


class TestFromFile:
    """Tests for RunConfig.from_file."""

    def test_load(self, write_config, tiny_config_text):
        config = RunConfig.from_file(write_config(tiny_config_text))
        assert config.engine is Engine.BOTH
        assert config.bond_caps == [4]
        assert config.output.run_name == "tiny"

    def test_bad_extension(self, write_config):
        with pytest.raises(ConfigurationError, match="Unsupported config extension"):
            RunConfig.from_file(write_config("system.initial_config: me", name="run.txt"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            RunConfig.from_file(tmp_path / "absent.yaml")

    def test_output_root_override(self, monkeypatch, tmp_path):
        config = validate_config("system.initial_config: me\noutput.directory: somewhere")
        monkeypatch.delenv("NURESOURCE_OUTPUT_DIR", raising=False)
        assert str(config.output_root()) == "somewhere"
        monkeypatch.setenv("NURESOURCE_OUTPUT_DIR", str(tmp_path))
        assert config.output_root() == tmp_path
