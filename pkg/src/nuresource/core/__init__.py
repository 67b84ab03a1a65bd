"""Run configuration, orchestration and results for nuresource.

Only the exception hierarchy is imported here: every other sub-package
depends on it, while the config, runner and result modules depend on every
other sub-package.
"""

from nuresource.core.exceptions import (
    EXIT_CAPACITY,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_VALIDATION,
    AnalysisError,
    CapacityError,
    ConfigurationError,
    FormatterError,
    NuResourceError,
    NumericalError,
    ValidationError,
)

__all__ = [
    "EXIT_CAPACITY",
    "EXIT_NUMERICAL",
    "EXIT_OK",
    "EXIT_VALIDATION",
    "AnalysisError",
    "CapacityError",
    "ConfigurationError",
    "FormatterError",
    "NuResourceError",
    "NumericalError",
    "ValidationError",
]
