"""
Report Writer

Writes a JSON report and optional TSV tables for one command.
Floats in TSV cells carry 17 significant digits; exact rationals are "a/b".
"""

import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, TextIO

import structlog


logger = structlog.get_logger(__name__)


def format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, Fraction):
        return str(value)
    return str(value)


def _json_default(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    if hasattr(value, "item"):
        return value.item()
    raise TypeError(f"cannot serialise {type(value).__name__}")


@dataclass
class Table:
    """Header plus rows, rendered as tab-separated values."""
    header: list[str]
    rows: list[list[Any]] = field(default_factory=list)

    def render(self) -> str:
        lines = ["\t".join(self.header)]
        lines.extend("\t".join(format_cell(v) for v in row) for row in self.rows)
        return "\n".join(lines) + "\n"


class ReportWriter:
    """
    Emits reports to a directory or to stdout.

    With an output directory the report goes to ``report.json`` and a table
    to ``<command>.tsv``; without one the JSON report is printed.
    """

    def __init__(self, output_dir: Optional[str] = None, stream: Optional[TextIO] = None):
        """
        Initialize the writer.

        Args:
            output_dir: Target directory, created on demand
            stream: Destination when no directory is given (stdout by default)
        """
        self.output_dir = Path(output_dir) if output_dir else None
        self.stream = stream

    @staticmethod
    def render_json(report: dict) -> str:
        return json.dumps(report, indent=2, sort_keys=True, default=_json_default) + "\n"

    def write(self, command: str, report: dict, table: Optional[Table] = None) -> list[Path]:
        """Write the report (and table) and return the files created."""
        text = self.render_json(report)
        if self.output_dir is None:
            (self.stream or sys.stdout).write(text)
            return []
        self.output_dir.mkdir(parents=True, exist_ok=True)
        written = [self.output_dir / "report.json"]
        written[0].write_text(text, encoding="utf-8")
        if table is not None:
            path = self.output_dir / f"{command}.tsv"
            path.write_text(table.render(), encoding="utf-8")
            written.append(path)
        logger.info("report_written", command=command, files=[str(p) for p in written])
        return written
