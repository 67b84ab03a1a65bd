"""Per-mode, per-time resource records."""

import math
from dataclasses import dataclass, field

from nuresource.core.exceptions import ValidationError

NAN = float("nan")

# Column order of the record tables
RECORD_COLUMNS = ("time", "mode", "S", "M2NL", "antiflat4", "Px", "Py", "Pz", "Pnu1", "maxbond")


@dataclass(frozen=True)
class ResourceRecord:
    """Resources and observables of one mode at one time.

    Unrequested measures are NaN.

    Attributes:
        time: Snapshot time
        mode: 1-based frequency index
        entropy: Single-mode von Neumann entropy (nats)
        nl_sre2: Spectrum-only non-local magic bound (nats)
        antiflatness4: 4F of the single-mode spectrum
        px, py, pz: Flavor-basis polarization components
        p_nu1: Survival probability of the first mass eigenstate
        bond_profile: Bond dimensions or Schmidt ranks per cut
    """

    time: float
    mode: int
    entropy: float = NAN
    nl_sre2: float = NAN
    antiflatness4: float = NAN
    px: float = NAN
    py: float = NAN
    pz: float = NAN
    p_nu1: float = NAN
    bond_profile: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.mode < 1:
            raise ValidationError(f"Modes are numbered from 1, got {self.mode}")

    @property
    def site(self) -> int:
        return self.mode - 1

    @property
    def max_bond(self) -> int:
        return max(self.bond_profile, default=1)

    def as_row(self) -> tuple:
        """Values in RECORD_COLUMNS order."""
        return (
            self.time,
            self.mode,
            self.entropy,
            self.nl_sre2,
            self.antiflatness4,
            self.px,
            self.py,
            self.pz,
            self.p_nu1,
            self.max_bond,
        )

    def to_dict(self) -> dict:
        return dict(zip(RECORD_COLUMNS, self.as_row(), strict=True)) | {
            "bond_profile": list(self.bond_profile)
        }


def normalized_entropy(entropy: float) -> float:
    """S / ln 2, the plotting scale on which one mode saturates at 1."""
    return entropy / math.log(2)
