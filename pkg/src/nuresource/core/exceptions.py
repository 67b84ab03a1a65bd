"""Custom exception hierarchy for nuresource.

Exception Hierarchy:
    NuResourceError (base)
    ├── ConfigurationError - Invalid run configuration (aggregated field errors)
    ├── ValidationError - Invalid input to an operation
    ├── CapacityError - Problem size above an engine guard
    ├── NumericalError - Non-finite amplitudes or failed decompositions
    ├── AnalysisError - Post-processing precondition failed
    └── FormatterError - Error serializing output
"""

from typing import Optional

# CLI exit codes, one per failure class
EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CAPACITY = 3
EXIT_NUMERICAL = 4


class NuResourceError(Exception):
    """Base exception for all nuresource errors.

    Attributes:
        message: Human-readable error description
        details: Optional additional context about the error
    """

    exit_code = EXIT_VALIDATION

    def __init__(self, message: str, details: Optional[str] = None):
        self.message = message
        self.details = details
        super().__init__(self._format_message())

    def _format_message(self) -> str:
        """Format the full error message."""
        if self.details:
            return f"{self.message}: {self.details}"
        return self.message


class ConfigurationError(NuResourceError):
    """Raised when a run configuration is invalid.

    All violated fields are collected before raising, so ``errors`` lists
    every problem rather than only the first one.

    Examples:
        - omegas not strictly increasing
        - empty measures list
        - full_sre requested for N > 10
    """

    def __init__(self, message: str, errors: Optional[list[str]] = None):
        self.errors = list(errors or [])
        details = "; ".join(self.errors) if self.errors else None
        super().__init__(message, details)


class ValidationError(NuResourceError):
    """Raised when the input of an operation is invalid.

    Examples:
        - site index out of range
        - empty or full partition for a reduced density matrix
        - spectrum that does not sum to one
    """

    pass


class CapacityError(NuResourceError):
    """Raised when a problem exceeds an engine's size guard.

    Attributes:
        limit: Largest supported value
        requested: Value that was asked for
    """

    exit_code = EXIT_CAPACITY

    def __init__(self, message: str, limit: int, requested: int, advice: Optional[str] = None):
        self.limit = limit
        self.requested = requested
        self.advice = advice
        details = f"requested={requested}, limit={limit}"
        if advice:
            details += f". {advice}"
        super().__init__(message, details)


class NumericalError(NuResourceError):
    """Raised when a computation produces non-finite values.

    Attributes:
        step: Evolution step at which the failure occurred, if known
        site: MPS site at which the failure occurred, if known
    """

    exit_code = EXIT_NUMERICAL

    def __init__(self, message: str, step: Optional[int] = None, site: Optional[int] = None):
        self.step = step
        self.site = site
        parts = []
        if step is not None:
            parts.append(f"step={step}")
        if site is not None:
            parts.append(f"site={site}")
        super().__init__(message, ", ".join(parts) or None)


class AnalysisError(NuResourceError):
    """Raised when a post-processing step cannot be applied.

    Examples:
        - records missing for some modes
        - mirror-pair check on an asymmetric configuration
    """

    pass


class FormatterError(NuResourceError):
    """Raised when output formatting fails."""

    def __init__(self, message: str, format_name: Optional[str] = None):
        self.format_name = format_name
        details = f"format={format_name}" if format_name else None
        super().__init__(message, details)


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
