"""JSON formatter for nuresource."""

import json
from collections.abc import Sequence
from typing import Any, Optional

from nuresource.core.exceptions import FormatterError
from nuresource.core.result import RunResult
from nuresource.formatters.base import FULL_PRECISION, Formatter, json_value


class JSONFormatter(Formatter):
    """Formatter for JSON output. Tables become lists of objects."""

    extension = "json"

    def __init__(self, indent: int = 2, **kwargs):
        self.indent = indent

    def format_table(
        self,
        columns: Sequence[str],
        rows: Sequence[Sequence[Any]],
        digits: Optional[int] = FULL_PRECISION,
    ) -> str:
        # repr already round-trips, so only the plot precision rounds
        precision = digits if digits is not None and digits < FULL_PRECISION else None
        records = []
        for row in rows:
            if len(row) != len(columns):
                raise FormatterError(
                    f"Row has {len(row)} values for {len(columns)} columns", "json"
                )
            records.append({c: json_value(v, precision) for c, v in zip(columns, row)})
        return json.dumps(records, indent=self.indent) + "\n"

    def format(self, result: RunResult) -> str:
        """Format the run result as JSON."""
        return json.dumps(_clean(result.to_dict()), indent=self.indent, default=str) + "\n"


def _clean(data: Any) -> Any:
    if isinstance(data, dict):
        return {k: _clean(v) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [_clean(v) for v in data]
    return json_value(data)
