"""Result data structures for nuresource runs."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from nuresource.observables.splits import ColocationRow, SplitReport, SymmetryCheck
from nuresource.resources.record import NAN, ResourceRecord

# Column order of the asymptotic summary table
ASYMPTOTIC_COLUMNS = (
    "mode", "omega", "S", "M2NL", "antiflat4", "Pz", "Pnu1", "region", "stationary", "max_rate",
)

# Column order of the per-snapshot global table
GLOBAL_COLUMNS = (
    "time", "norm", "energy", "mass_jz", "full_sre", "fidelity", "discarded_weight", "maxbond",
)

# Column order of the bond-cap differencing table
DIFF_COLUMNS = ("mode", "cap_from", "cap_to", "dS", "dM2NL", "region", "tandem")


@dataclass(frozen=True)
class AsymptoticRow:
    """Per-mode values at t_final.

    Attributes:
        mode: 1-based mode index
        omega: Vacuum frequency of the mode
        region: Phase region label of the entropy
        stationary: Whether the mass-basis P_z had settled over the final part of the run
        max_rate: Largest |dP_z/dt| in that window
    """

    mode: int
    omega: float
    entropy: float
    nl_sre2: float
    antiflatness4: float
    pz: float
    p_nu1: float
    region: str
    stationary: bool
    max_rate: float

    def as_row(self) -> tuple:
        return (
            self.mode, self.omega, self.entropy, self.nl_sre2, self.antiflatness4,
            self.pz, self.p_nu1, self.region, self.stationary, self.max_rate,
        )

    def to_dict(self) -> dict:
        return dict(zip(ASYMPTOTIC_COLUMNS, self.as_row(), strict=True))


@dataclass(frozen=True)
class GlobalRecord:
    """Whole-state quantities at one snapshot. Unavailable values are NaN."""

    time: float
    norm: float
    energy: float
    mass_jz: float
    full_sre: float = NAN
    fidelity: float = NAN
    discarded_weight: float = 0.0
    max_bond: int = 1

    def as_row(self) -> tuple:
        return (
            self.time, self.norm, self.energy, self.mass_jz, self.full_sre,
            self.fidelity, self.discarded_weight, self.max_bond,
        )

    def to_dict(self) -> dict:
        return dict(zip(GLOBAL_COLUMNS, self.as_row(), strict=True))


@dataclass
class EngineResult:
    """Everything one engine (at one bond cap) produced.

    Attributes:
        label: File-name stem, ``exact`` or ``mps-chi<cap>``
        engine: ``exact`` or ``mps``
        cap: Bond-dimension cap (None for the exact engine)
        records: Per-mode records at every snapshot
        global_records: Whole-state quantities at every snapshot
        asymptotic: Per-mode rows at t_final
        splits: Split boundaries of the asymptotic P_nu1 spectrum
        colocation: Resource structure at each strong split
        symmetry: Worst mirror-pair discrepancy over all snapshots, if applicable
        wall_time: Seconds spent in this engine
    """

    label: str
    engine: str
    cap: Optional[int] = None
    records: list[ResourceRecord] = field(default_factory=list)
    global_records: list[GlobalRecord] = field(default_factory=list)
    asymptotic: list[AsymptoticRow] = field(default_factory=list)
    splits: Optional[SplitReport] = None
    colocation: list[ColocationRow] = field(default_factory=list)
    symmetry: Optional[SymmetryCheck] = None
    wall_time: float = 0.0
    steps: int = 0

    @property
    def times(self) -> list[float]:
        return [g.time for g in self.global_records]

    @property
    def final_records(self) -> list[ResourceRecord]:
        """Records at the last snapshot, ordered by mode."""
        if not self.records:
            return []
        last = self.records[-1].time
        return sorted((r for r in self.records if r.time == last), key=lambda r: r.mode)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "engine": self.engine,
            "cap": self.cap,
            "wall_time": self.wall_time,
            "steps": self.steps,
            "asymptotic": [row.to_dict() for row in self.asymptotic],
            "splits": self.splits.to_dict() if self.splits else None,
            "colocation": [row.to_dict() for row in self.colocation],
            "symmetry": (
                {
                    "time": self.symmetry.time,
                    "entropy_delta": self.symmetry.entropy_delta,
                    "magic_delta": self.symmetry.magic_delta,
                }
                if self.symmetry
                else None
            ),
        }


@dataclass(frozen=True)
class DiffRow:
    """Change of the asymptotic resources of one mode between two bond caps.

    ``tandem`` is whether dS and dM2 share a sign; None when either is zero
    within 1e-10.
    """

    mode: int
    cap_from: int
    cap_to: int
    delta_entropy: float
    delta_nl_sre2: float
    region: str
    tandem: Optional[bool]

    def as_row(self) -> tuple:
        return (
            self.mode, self.cap_from, self.cap_to, self.delta_entropy,
            self.delta_nl_sre2, self.region, self.tandem,
        )

    def to_dict(self) -> dict:
        return dict(zip(DIFF_COLUMNS, self.as_row(), strict=True))


@dataclass
class RunManifest:
    """Provenance of a run: resolved parameters, version and timing."""

    run_id: str
    run_name: str
    config_hash: str
    version: str
    created_at: str
    config: dict[str, Any]
    wall_time: float = 0.0
    files: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "run_name": self.run_name,
            "config_hash": self.config_hash,
            "version": self.version,
            "created_at": self.created_at,
            "wall_time": self.wall_time,
            "config": dict(self.config),
            "files": list(self.files),
            "warnings": list(self.warnings),
        }


@dataclass
class RunResult:
    """Complete result of ``run`` or ``sweep``."""

    manifest: RunManifest
    output_dir: Path
    engines: list[EngineResult] = field(default_factory=list)
    diffs: list[DiffRow] = field(default_factory=list)

    def engine(self, label: str) -> EngineResult:
        for result in self.engines:
            if result.label == label:
                return result
        raise KeyError(label)

    def to_dict(self) -> dict:
        return {
            "manifest": self.manifest.to_dict(),
            "output_dir": str(self.output_dir),
            "engines": [e.to_dict() for e in self.engines],
            "diffs": [d.to_dict() for d in self.diffs],
        }
