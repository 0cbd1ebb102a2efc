"""
Base writer class for consistent emission across output formats.
"""

import math
import sys
from abc import ABC, abstractmethod
from contextlib import contextmanager
from typing import Any, Dict, Iterator, Optional, TextIO, Union

import numpy as np

from core.errors import NumericError, ResourceError
from core.models import ResultDocument

Destination = Union[str, TextIO]


def plain_value(value: Any) -> Any:
    """Collapse numpy scalars to Python values; reject non-finite floats."""
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        raise NumericError(f"non-finite value {value!r} in result document")
    return value


class BaseWriter(ABC):
    """Abstract base class for result document writers."""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        self.config = config or {}
        self.name = self.__class__.__name__.lower().replace('writer', '')

    @abstractmethod
    def render(self, doc: ResultDocument) -> str:
        """
        Render a document to text.

        Returns:
            The full document, ending with a newline
        """
        pass

    def write(self, doc: ResultDocument, destination: Destination = "-") -> None:
        text = self.render(doc)
        try:
            with self._open(destination) as stream:
                stream.write(text)
        except OSError as e:
            raise ResourceError(f"cannot write {self.name} output to {destination}: {e}") from e

    @contextmanager
    def _open(self, destination: Destination) -> Iterator[TextIO]:
        if destination == "-":
            yield sys.stdout
        elif isinstance(destination, str):
            with open(destination, "w", encoding="utf-8", newline="") as f:
                yield f
        else:
            yield destination
