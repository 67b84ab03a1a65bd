"""Input validation utilities for nuresource."""

from collections.abc import Iterable, Sequence
from pathlib import Path

import numpy as np

from nuresource.core.exceptions import CapacityError, ValidationError

MAX_CONFIG_SIZE = 1_000_000  # 1 MB of YAML is far beyond any real run config

SUPPORTED_CONFIG_EXTENSIONS = frozenset({".yaml", ".yml", ".json"})


def validate_site(site: int, n_sites: int) -> int:
    """Check that a site index lies in [0, n_sites).

    Raises:
        ValidationError: If the index is not an integer in range
    """
    if isinstance(site, bool) or not isinstance(site, (int, np.integer)):
        raise ValidationError(f"Site index must be an integer, got {type(site).__name__}")
    if not 0 <= site < n_sites:
        raise ValidationError(f"Site index {site} out of range for {n_sites} sites")
    return int(site)


def validate_partition(partition: Iterable[int], n_sites: int) -> tuple[int, ...]:
    """Validate a subsystem as a nonempty proper subset of the sites.

    Returns:
        Sorted tuple of unique site indices

    Raises:
        ValidationError: If the partition is empty, covers every site,
            repeats a site, or contains an out-of-range index
    """
    sites = [validate_site(s, n_sites) for s in partition]
    if not sites:
        raise ValidationError("Partition cannot be empty")
    if len(set(sites)) != len(sites):
        raise ValidationError(f"Partition repeats sites: {sites}")
    if len(sites) >= n_sites:
        raise ValidationError(
            f"Partition must be a proper subset of the {n_sites} sites, got {sorted(sites)}"
        )
    return tuple(sorted(sites))


def check_capacity(name: str, requested: int, limit: int, advice: str = "") -> None:
    """Raise CapacityError when ``requested`` exceeds ``limit``."""
    if requested > limit:
        raise CapacityError(f"{name} supports at most {limit} sites", limit, requested, advice)


def validate_strictly_increasing(values: Sequence[float], name: str = "omegas") -> None:
    """Check that a sequence is strictly increasing, naming offending indices.

    Raises:
        ValidationError: Listing every index i where values[i] >= values[i+1]
    """
    bad = [i for i in range(len(values) - 1) if not values[i] < values[i + 1]]
    if bad:
        pairs = ", ".join(f"{i}->{i + 1}" for i in bad)
        raise ValidationError(f"{name} must be strictly increasing", f"violated at indices {pairs}")


def validate_config_path(path: Path | str) -> Path:
    """Validate a run configuration file path.

    Raises:
        ValidationError: If the path is not a readable config file
        FileNotFoundError: If the file doesn't exist
    """
    path = Path(path)
    try:
        resolved = path.resolve()
    except (OSError, RuntimeError) as e:
        raise ValidationError(f"Cannot resolve config path: {e}") from e

    if not resolved.exists():
        raise FileNotFoundError(f"Config file not found: {path}")
    if not resolved.is_file():
        raise ValidationError(f"Config path is not a file: {path}")
    if resolved.stat().st_size > MAX_CONFIG_SIZE:
        raise ValidationError(f"Config file exceeds {MAX_CONFIG_SIZE:,} bytes: {path}")
    if resolved.suffix.lower() not in SUPPORTED_CONFIG_EXTENSIONS:
        raise ValidationError(
            f"Unsupported config extension '{resolved.suffix}'. "
            f"Supported: {', '.join(sorted(SUPPORTED_CONFIG_EXTENSIONS))}"
        )
    return resolved


def validate_output_dir(path: Path | str) -> Path:
    """Create (if needed) and return a writable output directory.

    Raises:
        ValidationError: If the path exists but is not a directory or
            cannot be created
    """
    path = Path(path)
    if path.exists() and not path.is_dir():
        raise ValidationError(f"Output path is not a directory: {path}")
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ValidationError(f"Cannot create output directory {path}: {e}") from e
    return path
