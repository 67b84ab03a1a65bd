"""Output formatters for nuresource."""

from nuresource.core.exceptions import FormatterError
from nuresource.formatters.base import (
    FULL_PRECISION,
    PLOT_PRECISION,
    Formatter,
    format_value,
    json_value,
)
from nuresource.formatters.csv_ import CSVFormatter
from nuresource.formatters.json_ import JSONFormatter
from nuresource.formatters.terminal import TerminalFormatter

__all__ = [
    "FULL_PRECISION",
    "PLOT_PRECISION",
    "Formatter",
    "CSVFormatter",
    "JSONFormatter",
    "TerminalFormatter",
    "format_value",
    "json_value",
    "get_formatter",
]


def get_formatter(format_type: str, **kwargs) -> Formatter:
    """Get a formatter by type.

    Args:
        format_type: Type of formatter (csv, json, terminal)
        **kwargs: Additional arguments for the formatter

    Raises:
        FormatterError: If the type is unknown
    """
    formatters = {
        "csv": CSVFormatter,
        "json": JSONFormatter,
        "terminal": TerminalFormatter,
    }

    formatter_class = formatters.get(format_type)
    if formatter_class is None:
        raise FormatterError(f"Unknown output format '{format_type}'", format_type)
    return formatter_class(**kwargs)
