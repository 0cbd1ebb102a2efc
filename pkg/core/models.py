"""
Run configuration and result document shared by the CLI, runner and writers.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

from .errors import DomainError

OUTPUT_FORMATS = ("csv", "json")

# Parameter names each command accepts.
COMMAND_PARAMETERS: Dict[str, Tuple[str, ...]] = {
    "curve": ("x", "gamma", "energy", "h", "hbar", "t_max", "points"),
    "maxfid": ("x_points", "gamma_points", "gamma_max"),
    "delta": ("gammas", "x_points"),
    "discrim": ("ratios", "points"),
    "bound": ("dim", "delta", "energy", "h", "hbar"),
    "verify-proof": ("dims", "gammas", "energy", "h", "hbar", "points"),
    "regions": ("x_points", "gamma_points", "gamma_max", "threshold", "alpha"),
    "table1": ("x_list", "gamma", "alpha", "energy", "h", "hbar"),
    "prior": ("kind", "dim", "sigma_sqs", "x_bars"),
    "crossing": ("x", "gamma", "energy", "h", "hbar", "thresholds"),
}

COMMANDS = tuple(COMMAND_PARAMETERS)


@dataclass(frozen=True)
class RunConfig:
    """A validated command with its named parameters."""

    command: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    output_format: str = "csv"
    output: str = "-"
    workers: int = 1

    def __post_init__(self):
        if self.command not in COMMAND_PARAMETERS:
            raise DomainError("command", f"unknown command {self.command!r}")
        unknown = sorted(set(self.parameters) - set(COMMAND_PARAMETERS[self.command]))
        if unknown:
            raise DomainError("parameters", f"{self.command} does not accept {', '.join(unknown)}")
        if self.parameters.get("h") is not None and self.parameters.get("hbar") is not None:
            raise DomainError("hbar", "give either h or hbar, not both")
        if self.output_format not in OUTPUT_FORMATS:
            raise DomainError("format", f"must be one of {OUTPUT_FORMATS}, got {self.output_format!r}")
        if self.workers < 1:
            raise DomainError("workers", f"must be at least 1, got {self.workers}")

    def given(self) -> Dict[str, Any]:
        """Parameters actually supplied (None and empty sequences dropped)."""
        return {key: value for key, value in self.parameters.items()
                if value is not None and value != ()}


@dataclass
class ResultDocument:
    """Rows of one command run, with run metadata."""

    columns: Sequence[str]
    rows: List[Sequence[Any]] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.columns = tuple(self.columns)
        for row in self.rows:
            if len(row) != len(self.columns):
                raise DomainError("rows", f"row of length {len(row)} does not match {len(self.columns)} columns")

    def records(self) -> List[Dict[str, Any]]:
        return [dict(zip(self.columns, row)) for row in self.rows]
