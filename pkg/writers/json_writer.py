"""
JSON emission: metadata object, column list and one object per row.
"""

import json
from typing import Any, Dict, Optional

from core.errors import NumericError
from core.models import ResultDocument

from .base_writer import BaseWriter, Destination, plain_value


def _plain(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return plain_value(value)


class JsonWriter(BaseWriter):
    """Pretty-printed JSON document; NaN and infinities are refused."""

    def render(self, doc: ResultDocument) -> str:
        payload = {
            "metadata": _plain(doc.metadata),
            "columns": list(doc.columns),
            "rows": [_plain(record) for record in doc.records()],
        }
        try:
            text = json.dumps(payload, indent=self.config.get("indent", 2), allow_nan=False)
        except ValueError as e:
            raise NumericError(f"cannot encode result document: {e}") from e
        return text + "\n"


def write(doc: ResultDocument, destination: Destination = "-",
          config: Optional[Dict[str, Any]] = None) -> None:
    """Function interface for the runner."""
    JsonWriter(config).write(doc, destination)
