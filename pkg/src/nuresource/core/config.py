"""Run configuration for nuresource experiments.

A config file is a YAML mapping with flat dotted keys::

    system.initial_config: mmmmmmeeeeee
    coupling.kind: power_decay
    engine: both
    bond_caps: [64, 48, 36]

Nested mappings are accepted and flattened. Every violated field is reported
at once; size limits of the engines are reported as capacity errors.
"""

import hashlib
import json
import logging
import math
from enum import Enum
from pathlib import Path
from typing import Any, Literal, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic import ValidationError as PydanticValidationError

from nuresource.core.exceptions import CapacityError, ConfigurationError, ValidationError
from nuresource.exact.evolution import EvolutionParams, IntegratorMethod
from nuresource.exact.measure import MAX_SRE_SITES
from nuresource.model.hamiltonian import MAX_DENSE_SITES
from nuresource.model.system import (
    CouplingKind,
    CouplingProfile,
    SystemSpec,
    default_omegas,
    format_flavor_config,
    parse_flavor_config,
)
from nuresource.mps.state import TruncationParams
from nuresource.utils.env import output_dir_override
from nuresource.utils.validation import validate_config_path

logger = logging.getLogger(__name__)

MIN_RUN_SITES = 2


class Engine(Enum):
    """Which engines a run uses."""

    EXACT = "exact"
    MPS = "mps"
    BOTH = "both"

    @property
    def uses_exact(self) -> bool:
        return self is not Engine.MPS

    @property
    def uses_mps(self) -> bool:
        return self is not Engine.EXACT


class Measure(Enum):
    """Quantities recorded per snapshot."""

    ENTROPY = "entropy"
    NL_SRE2 = "nl_sre2"
    ANTIFLATNESS = "antiflatness"
    FULL_SRE = "full_sre"
    POLARIZATION = "polarization"
    SURVIVAL = "survival"


ALL_MEASURES = tuple(Measure)


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class SystemSection(_Section):
    initial_config: Union[str, list[str]]
    n_sites: Optional[int] = None
    omegas: Optional[list[float]] = None
    omega0: float = Field(default=1.0, gt=0)
    mixing_angle: float = Field(default=0.1, gt=0, le=math.pi / 4)


class CouplingSection(_Section):
    kind: CouplingKind = CouplingKind.POWER_DECAY
    mu0: float = Field(default=5.0, ge=0)
    radius: float = Field(default=50.0, gt=0)
    exponent: float = Field(default=3.0, gt=0)
    start_radius: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _starts_outside_radius(self) -> "CouplingSection":
        if self.start_radius is not None and self.start_radius < self.radius:
            raise ValueError(f"start_radius must be at least radius ({self.radius})")
        return self


class EvolutionSection(_Section):
    dt: float = Field(default=0.01, gt=0)
    t_final: float = Field(default=500.0, ge=0)
    method: IntegratorMethod = IntegratorMethod.KRYLOV
    krylov_dim: int = Field(default=16, ge=4)
    snapshot_every: int = Field(default=100, ge=1)
    energy_tolerance: float = Field(default=1e-9, gt=0)
    adaptive: bool = True


class MpsSection(_Section):
    max_bond: Optional[int] = Field(default=None, ge=1)
    svd_cutoff: float = Field(default=0.0, ge=0)


class AnalysisSection(_Section):
    weak_threshold: float = Field(default=0.25, gt=0, lt=0.5)
    entropy_threshold: float = Field(default=0.4, ge=0)
    stationarity_fraction: float = Field(default=0.05, gt=0, le=1)
    stationarity_tolerance: float = Field(default=1e-3, gt=0)


class OutputSection(_Section):
    directory: str = "results"
    format: Literal["csv", "json"] = "csv"
    run_name: str = "run"
    plot_points: int = Field(default=200, ge=2)
    arc_points: int = Field(default=512, ge=2)


class RunConfig(_Section):
    """Fully validated experiment configuration."""

    system: SystemSection
    coupling: CouplingSection = CouplingSection()
    evolution: EvolutionSection = EvolutionSection()
    mps: MpsSection = MpsSection()
    analysis: AnalysisSection = AnalysisSection()
    output: OutputSection = OutputSection()
    engine: Engine = Engine.EXACT
    bond_caps: list[int] = Field(default_factory=list)
    measures: list[Measure] = Field(default_factory=lambda: list(ALL_MEASURES))
    workers: int = Field(default=1, ge=1)

    @field_validator("measures")
    @classmethod
    def _measures_nonempty(cls, value: list[Measure]) -> list[Measure]:
        if not value:
            raise ValueError("at least one measure is required")
        return list(dict.fromkeys(value))

    @field_validator("bond_caps")
    @classmethod
    def _caps_positive(cls, value: list[int]) -> list[int]:
        bad = [c for c in value if c < 1]
        if bad:
            raise ValueError(f"bond caps must be at least 1, got {bad}")
        return value

    # Resolved views

    @property
    def flavors(self):
        return parse_flavor_config(self.system.initial_config)

    @property
    def n_sites(self) -> int:
        return len(self.flavors)

    @property
    def omegas(self) -> tuple[float, ...]:
        if self.system.omegas is not None:
            return tuple(self.system.omegas)
        return default_omegas(self.n_sites, self.system.omega0)

    @property
    def max_bond(self) -> int:
        """Configured cap, defaulting to the exact bound 2^floor(N/2)."""
        if self.mps.max_bond is not None:
            return self.mps.max_bond
        return 2 ** (self.n_sites // 2)

    def wants(self, measure: Measure) -> bool:
        return measure in self.measures

    def to_system_spec(self) -> SystemSpec:
        return SystemSpec(
            omegas=self.omegas,
            initial_config=self.flavors,
            mixing_angle=self.system.mixing_angle,
            coupling=CouplingProfile(
                kind=self.coupling.kind,
                mu0=self.coupling.mu0,
                radius=self.coupling.radius,
                exponent=self.coupling.exponent,
                start_radius=self.coupling.start_radius,
            ),
        )

    def evolution_params(self, keep_states: bool = False) -> EvolutionParams:
        e = self.evolution
        return EvolutionParams(
            dt=e.dt,
            t_final=e.t_final,
            method=e.method,
            krylov_dim=e.krylov_dim,
            snapshot_every=e.snapshot_every,
            energy_tolerance=e.energy_tolerance,
            adaptive=e.adaptive,
            keep_states=keep_states,
        )

    def truncation(self, cap: Optional[int] = None) -> TruncationParams:
        return TruncationParams(max_bond=cap or self.max_bond, svd_cutoff=self.mps.svd_cutoff)

    def output_root(self) -> Path:
        """Output directory, honoring NURESOURCE_OUTPUT_DIR."""
        return output_dir_override() or Path(self.output.directory)

    def resolved(self) -> dict[str, Any]:
        """Flat dotted mapping with every default injected."""
        data = self.model_dump(mode="json")
        data["system"]["initial_config"] = format_flavor_config(self.flavors)
        data["system"]["n_sites"] = self.n_sites
        data["system"]["omegas"] = list(self.omegas)
        data["mps"]["max_bond"] = self.max_bond
        return flatten(data)

    def config_hash(self) -> str:
        """SHA-256 of the resolved configuration."""
        canonical = json.dumps(self.resolved(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.resolved(), sort_keys=True, allow_unicode=True)

    @classmethod
    def from_file(cls, path: Path | str) -> "RunConfig":
        """Load and validate a configuration file.

        Raises:
            ConfigurationError: If the file content is invalid
            CapacityError: If the problem exceeds an engine limit
            FileNotFoundError: If the config file doesn't exist
        """
        try:
            resolved = validate_config_path(path)
        except ValidationError as e:
            raise ConfigurationError(e.message, [e.message]) from e
        return validate_config(resolved.read_text(encoding="utf-8"))


def flatten(
    data: dict[str, Any], prefix: str = "", errors: Optional[list[str]] = None
) -> dict[str, Any]:
    """Collapse nested mappings into dotted keys.

    A key spelled both flat and nested is reported to ``errors`` when given.
    """
    flat: dict[str, Any] = {}
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            items = list(flatten(value, f"{name}.", errors).items())
        else:
            items = [(name, value)]
        for flat_key, flat_value in items:
            if flat_key in flat and errors is not None:
                errors.append(f"{flat_key}: given more than once")
            flat[flat_key] = flat_value
    return flat


def _nest(flat: dict[str, Any], errors: list[str]) -> dict[str, Any]:
    nested: dict[str, Any] = {}
    for key, value in flat.items():
        parts = key.split(".")
        node = nested
        for part in parts[:-1]:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                errors.append(f"{key}: conflicts with scalar key '{part}'")
                break
            node = child
        else:
            if parts[-1] in node:
                errors.append(f"{key}: given more than once")
            node[parts[-1]] = value
    return nested


def _format_pydantic(error: dict) -> str:
    location = ".".join(str(part) for part in error["loc"])
    if error["type"] == "extra_forbidden":
        return f"{location}: unknown key"
    return f"{location}: {error['msg']}"


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _semantic_errors(system: Any) -> list[str]:
    """Cross-field checks on the raw system section.

    Runs whether or not the structural parse succeeded. Values of the wrong
    type are skipped here; the structural errors already name them.
    """
    if not isinstance(system, dict):
        return []
    raw_config = system.get("initial_config")
    if isinstance(raw_config, list) and not all(isinstance(x, str) for x in raw_config):
        return []
    if not isinstance(raw_config, (str, list)):
        return []
    try:
        flavors = parse_flavor_config(raw_config)
    except ValidationError as e:
        return [f"system.initial_config: {e}"]

    errors: list[str] = []
    n = len(flavors)
    if n < MIN_RUN_SITES:
        errors.append(f"system.initial_config: a run needs at least {MIN_RUN_SITES} modes, got {n}")
    n_sites = system.get("n_sites")
    if isinstance(n_sites, int) and not isinstance(n_sites, bool) and n_sites != n:
        errors.append(f"system.n_sites: {n_sites} does not match initial_config length {n}")
    omegas = system.get("omegas")
    if isinstance(omegas, list) and all(_is_number(w) for w in omegas):
        if len(omegas) != n:
            errors.append(f"system.omegas: expected {n} values, got {len(omegas)}")
        bad = [i for i in range(len(omegas) - 1) if not omegas[i] < omegas[i + 1]]
        if bad:
            pairs = ", ".join(f"{i}->{i + 1}" for i in bad)
            errors.append(f"system.omegas: must be strictly increasing, violated at indices {pairs}")
        nonpositive = [i for i, w in enumerate(omegas) if not w > 0]
        if nonpositive:
            errors.append(f"system.omegas: must be positive, violated at indices {nonpositive}")
    return errors


def _capacity_problem(config: RunConfig) -> Optional[CapacityError]:
    n = config.n_sites
    if config.engine.uses_exact and n > MAX_DENSE_SITES:
        return CapacityError(
            f"engine={config.engine.value} supports at most {MAX_DENSE_SITES} sites",
            MAX_DENSE_SITES, n, "use engine=mps",
        )
    if config.wants(Measure.FULL_SRE) and n > MAX_SRE_SITES:
        return CapacityError(
            f"full_sre supports at most {MAX_SRE_SITES} sites",
            MAX_SRE_SITES, n, "drop full_sre from measures",
        )
    return None


def validate_config(text: str) -> RunConfig:
    """Parse and validate configuration text.

    Raises:
        ConfigurationError: Listing every violated field
        CapacityError: If a valid config exceeds an engine limit
    """
    try:
        raw = yaml.safe_load(text) or {}
    except yaml.YAMLError as e:
        raise ConfigurationError("Invalid YAML in configuration", [str(e)]) from e
    if not isinstance(raw, dict):
        raise ConfigurationError(
            "Configuration must be a YAML mapping", [f"got {type(raw).__name__}"]
        )

    errors: list[str] = []
    data = _nest(flatten(raw, errors=errors), errors)
    config = None
    try:
        config = RunConfig.model_validate(data)
    except PydanticValidationError as e:
        errors.extend(_format_pydantic(err) for err in e.errors())

    errors.extend(_semantic_errors(data.get("system")))
    if errors:
        raise ConfigurationError(f"Invalid configuration ({len(errors)} errors)", errors)

    assert config is not None
    problem = _capacity_problem(config)
    if problem is not None:
        raise problem
    logger.debug("Configuration valid: N=%d engine=%s", config.n_sites, config.engine.value)
    return config
