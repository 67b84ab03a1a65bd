"""Resource measures computed from an entanglement spectrum.

All logarithms are natural, so a single mode carries at most ln 2 of
entanglement and the non-local magic bound of a two-level spectrum peaks at
ln(4/3).
"""

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from nuresource.core.exceptions import ValidationError
from nuresource.resources.spectrum import EntanglementSpectrum, is_power_of_two

logger = logging.getLogger(__name__)

# The generic XOR sum costs O(r^4); r = 64 is N = 12 split in half
MAX_GENERIC_RANK = 64

DEFAULT_ENTROPY_THRESHOLD = 0.4
DEFAULT_ARC_POINTS = 512


def von_neumann_entropy(spectrum: EntanglementSpectrum) -> float:
    """-sum lambda ln lambda with 0 ln 0 = 0."""
    values = spectrum.values[spectrum.values > 0]
    return float(-np.sum(values * np.log(values)))


def _xor_sum(values: np.ndarray) -> float:
    """Quadruple sum over i1..i4 of the XOR-indexed square-root products."""
    r = values.size
    roots = np.sqrt(values)
    i2, i3, i4 = np.meshgrid(np.arange(r), np.arange(r), np.arange(r), indexing="ij")
    inner = roots[i2] * roots[i3] * roots[i4] * roots[i2 ^ i3 ^ i4]
    partial = np.empty(r)
    for i1 in range(r):
        partial[i1] = roots[i1] * np.sum(
            inner * roots[i1 ^ i2 ^ i3] * roots[i1 ^ i2 ^ i4] * roots[i1 ^ i3 ^ i4]
        )
    return float(np.sum(partial))


def nl_sre2_sum(spectrum: EntanglementSpectrum) -> float:
    """The argument of the logarithm in nl_sre2, via the generic XOR sum.

    Raises:
        ValidationError: If r is not a power of two or exceeds MAX_GENERIC_RANK
    """
    r = spectrum.r
    if not is_power_of_two(r):
        raise ValidationError(f"Spectrum dimension must be a power of two, got r={r}")
    if r > MAX_GENERIC_RANK:
        raise ValidationError(
            f"Generic non-local magic sum supports r <= {MAX_GENERIC_RANK}, got r={r}"
        )
    return _xor_sum(spectrum.values)


def nl_sre2(spectrum: EntanglementSpectrum) -> float:
    """Spectrum-only upper bound M2 on the non-local stabilizer Renyi entropy.

    Two-level spectra use the closed form
    -ln(l0^4 + l1^4 + 14 l0^2 l1^2); larger spectra use the generic sum.
    """
    if spectrum.r == 2:
        l0, l1 = spectrum.values
        total = l0**4 + l1**4 + 14.0 * l0 * l0 * l1 * l1
    else:
        total = nl_sre2_sum(spectrum)
    # the sum is at most one; clamp round-off so flat spectra give exactly 0
    return max(0.0, -math.log(total))


def antiflatness(spectrum: EntanglementSpectrum) -> float:
    """F = Tr rho^3 - (Tr rho^2)^2; zero iff the spectrum is flat on its support."""
    values = spectrum.values
    purity = float(np.sum(values**2))
    return max(0.0, float(np.sum(values**3)) - purity * purity)


@dataclass(frozen=True)
class BoundCheck:
    """Bound chain F/8 <= M_NL <= M2 evaluated on one spectrum.

    Attributes:
        lower: Antiflatness lower bound F/8
        antiflat4: 4F, the empirically tighter companion
        upper: Spectrum-only upper bound M2
        holds: F/8 <= M2
        tight_holds: 4F <= M2 (informational)
    """

    lower: float
    antiflat4: float
    upper: float
    holds: bool
    tight_holds: bool

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.lower, self.antiflat4, self.upper)

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "antiflat4": self.antiflat4,
            "upper": self.upper,
            "holds": self.holds,
            "tight_holds": self.tight_holds,
        }


def check_bounds(spectrum: EntanglementSpectrum, tolerance: float = 1e-14) -> BoundCheck:
    """Evaluate (F/8, 4F, M2) and the ordering flags."""
    f = antiflatness(spectrum)
    m2 = nl_sre2(spectrum)
    check = BoundCheck(
        lower=f / 8.0,
        antiflat4=4.0 * f,
        upper=m2,
        holds=f / 8.0 <= m2 + tolerance,
        tight_holds=4.0 * f <= m2 + tolerance,
    )
    if not check.tight_holds:
        logger.debug("4F = %.6e exceeds M2 = %.6e for r=%d", check.antiflat4, m2, spectrum.r)
    return check


@dataclass(frozen=True)
class BoundTally:
    """Bound-chain violation counts over a batch of spectra."""

    samples: int
    lower_violations: int
    tight_violations: int


def tally_bounds(spectra: Iterable[EntanglementSpectrum]) -> BoundTally:
    """Count F/8 > M2 and 4F > M2 over ``spectra`` and log the totals."""
    samples = lower = tight = 0
    for spectrum in spectra:
        check = check_bounds(spectrum)
        samples += 1
        lower += not check.holds
        tight += not check.tight_holds
    logger.info(
        "Bound chain over %d spectra: %d F/8 violations, %d 4F violations",
        samples, lower, tight,
    )
    return BoundTally(samples, lower, tight)


def two_level_spectrum(lambda0: float) -> EntanglementSpectrum:
    """The single-mode spectrum {lambda0, 1 - lambda0}.

    Raises:
        ValidationError: If lambda0 is outside [1/2, 1]
    """
    if not (0.5 <= lambda0 <= 1.0):
        raise ValidationError(f"lambda0 must lie in [1/2, 1], got {lambda0}")
    return EntanglementSpectrum(np.array([lambda0, 1.0 - lambda0]), 2)


def arc_curve(lambda0: float) -> tuple[float, float]:
    """Point (M2, S) of the single-mode constraint arc."""
    spectrum = two_level_spectrum(lambda0)
    return nl_sre2(spectrum), von_neumann_entropy(spectrum)


def sample_arc(points: int = DEFAULT_ARC_POINTS) -> np.ndarray:
    """Arc sampled at ``points`` equally spaced lambda0 in [1/2, 1].

    Returns:
        Array of shape (points, 3) with columns lambda0, M2, S
    """
    if points < 2:
        raise ValidationError(f"Arc needs at least 2 points, got {points}")
    grid = np.linspace(0.5, 1.0, points)
    rows = [(l0, *arc_curve(float(l0))) for l0 in grid]
    return np.array(rows, dtype=np.float64)


def _arc_slope(lambda0: float) -> float:
    # d/dl0 of the log argument 1 - 4p + 16p^2 with p = l0 (1 - l0)
    p = lambda0 * (1.0 - lambda0)
    return (32.0 * p - 4.0) * (1.0 - 2.0 * lambda0)


def arc_maximum(xtol: float = 1e-15) -> tuple[float, float]:
    """Locate the maximum of M2 along the arc.

    Returns:
        (lambda0, M2) at the maximum; analytically (1/2 + sqrt(2)/4, ln 4/3)
    """
    lambda0 = brentq(_arc_slope, 0.5 + 1e-3, 1.0 - 1e-9, xtol=xtol)
    return float(lambda0), arc_curve(float(lambda0))[0]


class PhaseRegion(Enum):
    """Entanglement regime of a mode."""

    LOW = "low_entanglement"
    HIGH = "high_entanglement"


def phase_region(entropy: float, threshold: float = DEFAULT_ENTROPY_THRESHOLD) -> PhaseRegion:
    """Classify a mode's entropy; the threshold itself counts as high.

    Raises:
        ValidationError: If entropy is negative or not finite
    """
    if not math.isfinite(entropy) or entropy < 0:
        raise ValidationError(f"Entropy must be a finite non-negative number, got {entropy}")
    return PhaseRegion.HIGH if entropy >= threshold else PhaseRegion.LOW
