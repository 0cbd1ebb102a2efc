"""
CSV emission: one header line, `\n` line endings, shortest round-trip floats.
"""

import csv
import io
from typing import Any, Dict, Optional

from core.models import ResultDocument

from .base_writer import BaseWriter, Destination, plain_value


def format_cell(value: Any) -> str:
    value = plain_value(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


class CsvWriter(BaseWriter):
    """Comma-separated rows; booleans become 0/1 and missing values empty cells."""

    def render(self, doc: ResultDocument) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(doc.columns)
        for row in doc.rows:
            writer.writerow([format_cell(value) for value in row])
        return buffer.getvalue()


def write(doc: ResultDocument, destination: Destination = "-",
          config: Optional[Dict[str, Any]] = None) -> None:
    """Function interface for the runner."""
    CsvWriter(config).write(doc, destination)
