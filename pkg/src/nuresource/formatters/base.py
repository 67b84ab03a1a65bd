"""Base formatter interface for nuresource."""

import math
from abc import ABC, abstractmethod
from collections.abc import Sequence
from typing import Any, Optional

import numpy as np

from nuresource.core.result import RunResult

# Lossless round-trip: 17 significant digits, lowercase scientific
FULL_PRECISION = 17
# Plot-ready files
PLOT_PRECISION = 6


def format_value(value: Any, digits: Optional[int] = FULL_PRECISION) -> str:
    """Render one table cell as text.

    Floats use ``digits`` significant digits in lowercase scientific notation
    (None keeps Python's shortest repr). Booleans are ``true``/``false`` and
    None is the empty string.
    """
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if digits is None:
            return repr(x)
        return f"{x:.{digits - 1}e}"
    return str(value)


def json_value(value: Any, digits: Optional[int] = None) -> Any:
    """Python value for JSON output; NaN and infinities become None."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if not math.isfinite(x):
            return None
        return float(f"{x:.{digits - 1}e}") if digits else x
    return value


class Formatter(ABC):
    """Base class for output formatters."""

    extension = "txt"

    @abstractmethod
    def format(self, result: RunResult) -> str:
        """Format a run summary.

        Args:
            result: Completed run

        Returns:
            Formatted string output
        """
        pass

    def format_table(
        self,
        columns: Sequence[str],
        rows: Sequence[Sequence[Any]],
        digits: Optional[int] = FULL_PRECISION,
    ) -> str:
        """Format one table of rows in column order."""
        raise NotImplementedError(f"{type(self).__name__} does not write tables")
