"""Spectral splits, their co-location with resources, and mirror symmetry."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from nuresource.core.exceptions import AnalysisError, ValidationError
from nuresource.model.system import SystemSpec
from nuresource.resources.record import ResourceRecord

logger = logging.getLogger(__name__)

STRONG_SPLIT = 0.5
DEFAULT_WEAK_THRESHOLD = 0.25

# S and M2 within this distance count as equal when locating extrema
EXTREMUM_TOLERANCE = 1e-5

DEFAULT_STATIONARITY_FRACTION = 0.05
DEFAULT_STATIONARITY_TOLERANCE = 1e-3


class SplitStrength(Enum):
    STRONG = "strong"
    WEAK = "weak"


@dataclass(frozen=True)
class SplitBoundary:
    """A jump of P_nu1 between adjacent modes (1-based)."""

    lower_mode: int
    upper_mode: int
    delta: float
    strength: SplitStrength

    def to_dict(self) -> dict:
        return {
            "lower_mode": self.lower_mode,
            "upper_mode": self.upper_mode,
            "delta": self.delta,
            "strength": self.strength.value,
        }


@dataclass
class SplitReport:
    """Split boundaries of an asymptotic P_nu1 spectrum.

    Attributes:
        boundaries: Boundaries sorted by mode index
        per_mode_p: P_nu1 per mode, mode 1 first
        weak_threshold: Threshold used for weak boundaries
    """

    boundaries: list[SplitBoundary] = field(default_factory=list)
    per_mode_p: list[float] = field(default_factory=list)
    weak_threshold: float = DEFAULT_WEAK_THRESHOLD

    @property
    def strong(self) -> list[SplitBoundary]:
        return [b for b in self.boundaries if b.strength is SplitStrength.STRONG]

    @property
    def weak(self) -> list[SplitBoundary]:
        return [b for b in self.boundaries if b.strength is SplitStrength.WEAK]

    def to_dict(self) -> dict:
        return {
            "boundaries": [b.to_dict() for b in self.boundaries],
            "per_mode_p": list(self.per_mode_p),
            "weak_threshold": self.weak_threshold,
        }


def detect_splits(per_mode_p: Sequence[float], weak_threshold: float = DEFAULT_WEAK_THRESHOLD) -> SplitReport:
    """Classify adjacent-mode jumps |P(i+1) - P(i)| as strong (>= 0.5) or weak.

    Raises:
        ValidationError: If fewer than two modes are given or the weak
            threshold is not below the strong one
    """
    values = [float(p) for p in per_mode_p]
    if len(values) < 2:
        raise ValidationError(f"Split detection needs at least 2 modes, got {len(values)}")
    if not 0 < weak_threshold < STRONG_SPLIT:
        raise ValidationError(f"weak_threshold must lie in (0, {STRONG_SPLIT}), got {weak_threshold}")

    boundaries = []
    for i in range(len(values) - 1):
        delta = abs(values[i + 1] - values[i])
        if delta >= STRONG_SPLIT:
            strength = SplitStrength.STRONG
        elif delta >= weak_threshold:
            strength = SplitStrength.WEAK
        else:
            continue
        boundaries.append(SplitBoundary(i + 1, i + 2, delta, strength))
    return SplitReport(boundaries, values, weak_threshold)


@dataclass(frozen=True)
class ColocationRow:
    """Resource structure at one strong split boundary.

    Attributes:
        boundary: The split
        mode: Higher-entropy mode of the pair
        entropy_global_max: Its entropy is the maximum over all modes
        magic_local_min: Its nl_sre2 is not above either neighbor's
        colocated: Both of the above
    """

    boundary: SplitBoundary
    mode: int
    entropy_global_max: bool
    magic_local_min: bool

    @property
    def colocated(self) -> bool:
        return self.entropy_global_max and self.magic_local_min

    def to_dict(self) -> dict:
        return {
            "lower_mode": self.boundary.lower_mode,
            "upper_mode": self.boundary.upper_mode,
            "mode": self.mode,
            "entropy_global_max": self.entropy_global_max,
            "magic_local_min": self.magic_local_min,
            "colocated": self.colocated,
        }


def _by_mode(records: Sequence[ResourceRecord], n_modes: int) -> dict[int, ResourceRecord]:
    table = {r.mode: r for r in records}
    missing = [m for m in range(1, n_modes + 1) if m not in table]
    if missing:
        raise AnalysisError("Records are missing modes", ", ".join(map(str, missing)))
    return table


def colocate_resources(
    report: SplitReport,
    records: Sequence[ResourceRecord],
    tolerance: float = EXTREMUM_TOLERANCE,
) -> list[ColocationRow]:
    """Check each strong split for an entropy maximum and magic dip.

    Raises:
        AnalysisError: If records do not cover every mode of the report
    """
    n_modes = len(report.per_mode_p)
    table = _by_mode(records, n_modes)
    entropies = np.array([table[m].entropy for m in range(1, n_modes + 1)])
    magic = np.array([table[m].nl_sre2 for m in range(1, n_modes + 1)])
    top = np.nanmax(entropies)

    rows = []
    for boundary in report.strong:
        lo, hi = boundary.lower_mode, boundary.upper_mode
        mode = hi if entropies[hi - 1] > entropies[lo - 1] else lo
        neighbors = [m for m in (mode - 1, mode + 1) if 1 <= m <= n_modes]
        rows.append(
            ColocationRow(
                boundary=boundary,
                mode=mode,
                entropy_global_max=bool(entropies[mode - 1] >= top - tolerance),
                magic_local_min=all(magic[mode - 1] <= magic[m - 1] + tolerance for m in neighbors),
            )
        )
    return rows


@dataclass(frozen=True)
class SymmetryCheck:
    """Largest mirror-pair discrepancies at one time."""

    time: float
    entropy_delta: float
    magic_delta: float

    @property
    def max_delta(self) -> float:
        return max(self.entropy_delta, self.magic_delta)


def mirror_symmetric(spec: SystemSpec, tolerance: float = 1e-12) -> bool:
    """Whether mode i mirrors mode N+1-i under a flavor flip.

    Requires config[i] to be the flip of config[N-1-i] and omega_i +
    omega_{N+1-i} to be the same for every pair.
    """
    n = spec.n_sites
    config = spec.initial_config
    if any(config[i] is not config[n - 1 - i].flipped for i in range(n)):
        return False
    sums = [spec.omegas[i] + spec.omegas[n - 1 - i] for i in range(n)]
    return max(sums) - min(sums) <= tolerance * max(1.0, max(sums))


def pair_symmetry_check(records: Sequence[ResourceRecord], spec: SystemSpec) -> SymmetryCheck:
    """max over i of |S(w_i) - S(w_{N+1-i})| and the same for nl_sre2.

    Records must share one time.

    Raises:
        AnalysisError: If the configuration is not mirror symmetric, or
            records are missing or come from different times
    """
    if not mirror_symmetric(spec):
        raise AnalysisError(
            "Mirror-pair check is inapplicable",
            "initial flavors and frequencies are not symmetric under flip and reversal",
        )
    times = {r.time for r in records}
    if len(times) != 1:
        raise AnalysisError("Mirror-pair check needs records from exactly one time")
    n = spec.n_sites
    table = _by_mode(records, n)
    entropy_delta = max(abs(table[m].entropy - table[n + 1 - m].entropy) for m in range(1, n + 1))
    magic_delta = max(abs(table[m].nl_sre2 - table[n + 1 - m].nl_sre2) for m in range(1, n + 1))
    return SymmetryCheck(times.pop(), float(entropy_delta), float(magic_delta))


@dataclass(frozen=True)
class Stationarity:
    """Late-time drift of a polarization series."""

    stationary: bool
    max_rate: float


def stationarity(
    times: Sequence[float],
    values: Sequence[float],
    fraction: float = DEFAULT_STATIONARITY_FRACTION,
    tolerance: float = DEFAULT_STATIONARITY_TOLERANCE,
) -> Stationarity:
    """Largest |dP/dt| over the final ``fraction`` of the run.

    The window always spans at least the last two snapshots.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.size != v.size:
        raise ValidationError("times and values must have the same length")
    if t.size < 2:
        return Stationarity(False, float("nan"))
    start_time = t[-1] - fraction * (t[-1] - t[0])
    start = min(int(np.searchsorted(t, start_time, side="left")), t.size - 2)
    rates = np.abs(np.diff(v[start:]) / np.diff(t[start:]))
    max_rate = float(np.max(rates))
    return Stationarity(max_rate < tolerance, max_rate)
