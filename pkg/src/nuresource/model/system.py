"""Physical system description: frequency grid, mixing, coupling and flavors.

Conventions used everywhere in the package:

- Electron flavor is spin up, local basis vector (1, 0), polarization P_z = +1.
- Mass and flavor bases are related by nu_e = cos(theta) nu_1 + sin(theta) nu_2.
- Site 0 is the most significant bit of a computational-basis index; site i
  carries frequency omegas[i], reported as mode i + 1.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Union

import numpy as np

from nuresource.core.exceptions import ValidationError
from nuresource.utils.validation import validate_strictly_increasing


class Flavor(Enum):
    """Two-flavor labels of a neutrino mode."""

    ELECTRON = "e"
    MUON = "m"

    @property
    def flipped(self) -> "Flavor":
        """The other flavor."""
        return Flavor.MUON if self is Flavor.ELECTRON else Flavor.ELECTRON


class Basis(Enum):
    """Single-particle basis in which operators are expressed."""

    MASS = "mass"
    FLAVOR = "flavor"


class CouplingKind(Enum):
    """Time profiles for the neutrino-neutrino coupling mu(t)."""

    CONSTANT = "constant"
    POWER_DECAY = "power_decay"
    SUPERNOVA_SINGLE_ANGLE = "supernova_single_angle"


_FLAVOR_ALIASES = {
    "e": Flavor.ELECTRON,
    "electron": Flavor.ELECTRON,
    "nu_e": Flavor.ELECTRON,
    "m": Flavor.MUON,
    "mu": Flavor.MUON,
    "μ": Flavor.MUON,
    "muon": Flavor.MUON,
    "nu_mu": Flavor.MUON,
}


def parse_flavor(label: Union[str, Flavor]) -> Flavor:
    """Parse one flavor label (``e``, ``m``, ``mu``, ``μ``, ``electron``, ...)."""
    if isinstance(label, Flavor):
        return label
    flavor = _FLAVOR_ALIASES.get(str(label).strip().lower())
    if flavor is None:
        raise ValidationError(f"Unknown flavor label '{label}'", "use e or m")
    return flavor


def parse_flavor_config(config: Union[str, Sequence[Union[str, Flavor]]]) -> tuple[Flavor, ...]:
    """Parse an initial flavor configuration.

    A string is read one character per mode (``"mmmeeeeeeeee"`` is three muon
    modes followed by nine electron modes); a sequence is read one label per
    entry.
    """
    labels = list(config.strip()) if isinstance(config, str) else list(config)
    if not labels:
        raise ValidationError("Initial flavor configuration cannot be empty")
    return tuple(parse_flavor(label) for label in labels)


def format_flavor_config(config: Sequence[Flavor]) -> str:
    """Inverse of parse_flavor_config for compact strings."""
    return "".join(f.value for f in config)


@dataclass(frozen=True)
class CouplingProfile:
    """Neutrino-neutrino coupling strength mu(t), in units of omega_0.

    Profiles:
        constant:                mu0
        power_decay:             mu0 * (R / (R + t))**p
        supernova_single_angle:  mu0 * g(r0 + t) / g(r0), g(r) = (1 - sqrt(1 - (R / r)**2))**2

    For the supernova profile R is the neutrinosphere radius and r0 =
    ``start_radius`` (default R) the radius at t = 0.
    """

    kind: CouplingKind = CouplingKind.POWER_DECAY
    mu0: float = 5.0
    radius: float = 50.0
    exponent: float = 3.0
    start_radius: float | None = None

    def __post_init__(self):
        if not isinstance(self.kind, CouplingKind):
            object.__setattr__(self, "kind", CouplingKind(self.kind))
        if not math.isfinite(self.mu0) or self.mu0 < 0:
            raise ValidationError(f"mu0 must be a finite non-negative number, got {self.mu0}")
        if self.kind is not CouplingKind.CONSTANT:
            if not self.radius > 0:
                raise ValidationError(f"radius must be positive, got {self.radius}")
            if self.kind is CouplingKind.POWER_DECAY and not self.exponent > 0:
                raise ValidationError(f"exponent must be positive, got {self.exponent}")
        if self.start_radius is not None and not self.start_radius >= self.radius:
            raise ValidationError(
                f"start_radius must be at least radius ({self.radius}), got {self.start_radius}"
            )

    def __call__(self, t: float) -> float:
        return coupling_at(self, t)


def coupling_at(profile: CouplingProfile, t: float) -> float:
    """Evaluate mu(t) for a coupling profile.

    Raises:
        ValidationError: If t is negative or not finite
    """
    if not math.isfinite(t) or t < 0:
        raise ValidationError(f"Coupling time must be a finite non-negative number, got {t}")

    if profile.kind is CouplingKind.CONSTANT:
        return profile.mu0

    if profile.kind is CouplingKind.POWER_DECAY:
        return profile.mu0 * (profile.radius / (profile.radius + t)) ** profile.exponent
    start = profile.radius if profile.start_radius is None else profile.start_radius
    return profile.mu0 * _bulb(profile.radius, start + t) / _bulb(profile.radius, start)


def _bulb(radius: float, r: float) -> float:
    # 1 - sqrt(1 - x^2) without cancellation at large r
    x2 = (radius / r) ** 2
    return (x2 / (1.0 + math.sqrt(1.0 - x2))) ** 2


def default_omegas(n_sites: int, omega0: float = 1.0) -> tuple[float, ...]:
    """Equally spaced grid omega_i = i * omega0 for i = 1..N."""
    return tuple(omega0 * (i + 1) for i in range(n_sites))


@dataclass(frozen=True)
class SystemSpec:
    """A two-flavor N-neutrino system.

    Attributes:
        omegas: Vacuum oscillation frequencies, strictly increasing and positive
        mixing_angle: Two-flavor mixing angle theta in (0, pi/4]
        coupling: Coupling profile mu(t)
        initial_config: Flavor of each mode at t = 0
    """

    omegas: tuple[float, ...]
    initial_config: tuple[Flavor, ...]
    mixing_angle: float = 0.1
    coupling: CouplingProfile = field(default_factory=CouplingProfile)

    def __post_init__(self):
        object.__setattr__(self, "omegas", tuple(float(w) for w in self.omegas))
        object.__setattr__(self, "initial_config", parse_flavor_config(self.initial_config))
        self._validate()

    def _validate(self) -> None:
        if len(self.omegas) < 1:
            raise ValidationError("A system needs at least one neutrino mode")
        if len(self.initial_config) != len(self.omegas):
            raise ValidationError(
                f"initial_config has {len(self.initial_config)} entries "
                f"but there are {len(self.omegas)} omegas"
            )
        if not all(math.isfinite(w) and w > 0 for w in self.omegas):
            raise ValidationError("All omegas must be positive and finite", str(self.omegas))
        validate_strictly_increasing(self.omegas)
        if not 0 < self.mixing_angle <= math.pi / 4:
            raise ValidationError(
                f"mixing_angle must lie in (0, pi/4], got {self.mixing_angle}"
            )

    @property
    def n_sites(self) -> int:
        """Number of neutrino modes N."""
        return len(self.omegas)

    @property
    def omega_array(self) -> np.ndarray:
        return np.asarray(self.omegas, dtype=float)

    @classmethod
    def build(
        cls,
        initial_config: Union[str, Sequence[Union[str, Flavor]]],
        omegas: Sequence[float] | None = None,
        omega0: float = 1.0,
        mixing_angle: float = 0.1,
        coupling: CouplingProfile | None = None,
    ) -> "SystemSpec":
        """Construct a spec, defaulting to the equally spaced frequency grid."""
        flavors = parse_flavor_config(initial_config)
        grid = tuple(omegas) if omegas is not None else default_omegas(len(flavors), omega0)
        return cls(
            omegas=grid,
            initial_config=flavors,
            mixing_angle=mixing_angle,
            coupling=coupling or CouplingProfile(),
        )
