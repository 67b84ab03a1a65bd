"""Entanglement spectra of bipartitioned pure states."""

from collections.abc import Iterable, Iterator
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from nuresource.core.exceptions import ValidationError

SUM_TOLERANCE = 1e-10

# Eigenvalues of a PSD matrix may come out slightly negative
NEGATIVE_TOLERANCE = 1e-12


def is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class EntanglementSpectrum:
    """Schmidt weights across a bipartition, descending and zero-padded to r.

    Attributes:
        values: Descending non-negative weights summing to one
        r: Declared dimension 2^|A| of the smaller side
    """

    values: NDArray[np.float64]
    r: int

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64).reshape(-1)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

        if values.size != self.r:
            raise ValidationError(f"Spectrum has {values.size} values but r = {self.r}")
        if values.size and np.min(values) < 0:
            raise ValidationError("Spectrum values must be non-negative", f"min={values.min():.3e}")
        if np.any(np.diff(values) > 0):
            raise ValidationError("Spectrum values must be in descending order")
        total = float(np.sum(values))
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ValidationError("Spectrum must sum to one", f"sum={total:.15f}")

    @classmethod
    def from_values(cls, values: Iterable[float], r: int | None = None) -> "EntanglementSpectrum":
        """Sort, clip round-off negatives and zero-pad raw weights.

        Raises:
            ValidationError: If a value is clearly negative or there are more
                values than r
        """
        raw = np.asarray(list(values), dtype=np.float64).reshape(-1)
        if raw.size and np.min(raw) < -NEGATIVE_TOLERANCE:
            raise ValidationError("Spectrum values must be non-negative", f"min={raw.min():.3e}")
        raw = np.clip(raw, 0.0, None)
        size = raw.size if r is None else r
        if raw.size > size:
            raise ValidationError(f"Got {raw.size} values for a spectrum of dimension {size}")
        padded = np.zeros(size, dtype=np.float64)
        padded[: raw.size] = np.sort(raw)[::-1]
        return cls(padded, size)

    @classmethod
    def from_density_matrix(cls, rho: NDArray[np.complex128]) -> "EntanglementSpectrum":
        """Spectrum of a reduced density matrix."""
        eigenvalues = np.linalg.eigvalsh(rho)
        return cls.from_values(eigenvalues, r=rho.shape[0])

    @classmethod
    def from_singular_values(cls, singular_values, r: int) -> "EntanglementSpectrum":
        """Squared, normalized Schmidt coefficients padded to r."""
        weights = np.asarray(singular_values, dtype=np.float64) ** 2
        total = np.sum(weights)
        if total <= 0:
            raise ValidationError("Singular values of a zero state")
        return cls.from_values(weights / total, r=r)

    @property
    def natural_rank(self) -> int:
        return int(np.count_nonzero(self.values))

    @property
    def lambda0(self) -> float:
        """Largest weight."""
        return float(self.values[0])

    def __len__(self) -> int:
        return self.r


def random_spectra(
    r: int, count: int, rng: np.random.Generator
) -> Iterator[EntanglementSpectrum]:
    """``count`` spectra of dimension r drawn uniformly from the simplex."""
    for weights in rng.dirichlet(np.ones(r), size=count):
        yield EntanglementSpectrum.from_values(weights, r)
