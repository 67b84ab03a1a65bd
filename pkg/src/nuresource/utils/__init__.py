"""Utility modules for nuresource."""

from nuresource.utils.env import get_env, output_dir_override
from nuresource.utils.krylov import expm_krylov, lanczos_tridiagonal
from nuresource.utils.logging import setup_logging
from nuresource.utils.validation import (
    check_capacity,
    validate_config_path,
    validate_output_dir,
    validate_partition,
    validate_site,
    validate_strictly_increasing,
)

__all__ = [
    # Environment
    "get_env",
    "output_dir_override",
    # Linear algebra
    "expm_krylov",
    "lanczos_tridiagonal",
    # Logging
    "setup_logging",
    # Validation
    "check_capacity",
    "validate_config_path",
    "validate_output_dir",
    "validate_partition",
    "validate_site",
    "validate_strictly_increasing",
]
