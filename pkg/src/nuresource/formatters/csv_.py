"""CSV formatter for nuresource tables."""

import csv
import io
from collections.abc import Sequence
from typing import Any, Optional

from nuresource.core.exceptions import FormatterError
from nuresource.core.result import ASYMPTOTIC_COLUMNS, RunResult
from nuresource.formatters.base import FULL_PRECISION, Formatter, format_value


class CSVFormatter(Formatter):
    """Header row, UTF-8, LF line endings, fixed float formatting."""

    extension = "csv"

    def __init__(self, **kwargs):
        pass

    def format_table(
        self,
        columns: Sequence[str],
        rows: Sequence[Sequence[Any]],
        digits: Optional[int] = FULL_PRECISION,
    ) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            if len(row) != len(columns):
                raise FormatterError(
                    f"Row has {len(row)} values for {len(columns)} columns", "csv"
                )
            writer.writerow([format_value(v, digits) for v in row])
        return buffer.getvalue()

    def format(self, result: RunResult) -> str:
        """Asymptotic rows of every engine, labelled in the first column."""
        rows = [
            (engine.label, *row.as_row())
            for engine in result.engines
            for row in engine.asymptotic
        ]
        return self.format_table(("engine", *ASYMPTOTIC_COLUMNS), rows)
