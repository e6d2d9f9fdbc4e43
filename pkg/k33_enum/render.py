"""Table, CSV and JSON rendering of command output."""

from pathlib import Path

from pydantic import BaseModel

from .schemas import (
    ConstantsReport,
    CountTable,
    OracleCounts,
    OutputFormat,
    SeriesDump,
    VerificationReport,
)
from .utils import ensure_directory, get_logger


def _json(model: BaseModel) -> str:
    return model.model_dump_json(indent=2, by_alias=True, exclude_none=True) + "\n"


def render_counts(table: CountTable, fmt: OutputFormat) -> str:
    """
    Render exact counts.

    Args:
        table: Count rows from a series pipeline
        fmt: Output format

    Returns:
        Rendered text ending in a newline
    """
    if fmt == OutputFormat.JSON:
        return _json(table)
    if fmt == OutputFormat.CSV:
        lines = ["n,count"] + [f"{row.n},{row.count}" for row in table.rows]
        return "\n".join(lines) + "\n"

    width = max((len(str(row.count)) for row in table.rows), default=5)
    lines = [
        f"# {table.graph_class.value} / {table.connectivity.value}"
        f" (q = {table.q}, order {table.series_order})",
        f"{'n':>4}  {'count':>{width}}",
    ]
    for row in table.rows:
        lines.append(f"{row.n:>4}  {row.count:>{width}}")
    return "\n".join(lines) + "\n"


def render_series(dump: SeriesDump, fmt: OutputFormat) -> str:
    if fmt == OutputFormat.JSON:
        return _json(dump)
    if fmt == OutputFormat.CSV:
        lines = ["k,coefficient"] + [f"{k},{c}" for k, c in enumerate(dump.coefficients)]
        return "\n".join(lines) + "\n"
    lines = [f"# {dump.gf} to order {dump.order}"]
    lines += [f"{k:>4}  {c}" for k, c in enumerate(dump.coefficients)]
    return "\n".join(lines) + "\n"


def render_constants(report: ConstantsReport, fmt: OutputFormat) -> str:
    """Constants as JSON, or as key/value rows; absent constants are omitted."""
    if fmt == OutputFormat.JSON:
        return _json(report)
    values = report.model_dump(by_alias=True, exclude_none=True, mode="json")
    if fmt == OutputFormat.CSV:
        lines = ["key,value"] + [f"{key},{value}" for key, value in values.items()]
        return "\n".join(lines) + "\n"
    width = max(len(key) for key in values)
    return "\n".join(f"{key:<{width}}  {value}" for key, value in values.items()) + "\n"


def render_oracle(counts: OracleCounts, fmt: OutputFormat) -> str:
    if fmt == OutputFormat.JSON:
        return _json(counts)
    values = counts.model_dump(exclude_none=True, mode="json")
    if fmt == OutputFormat.CSV:
        keys = list(values)
        return ",".join(keys) + "\n" + ",".join(str(values[k]) for k in keys) + "\n"
    return "  ".join(f"{key}={value}" for key, value in values.items()) + "\n"


def render_report(report: VerificationReport, fmt: OutputFormat) -> str:
    """PASS/FAIL per check; failures carry both values."""
    if fmt == OutputFormat.JSON:
        return _json(report)
    if fmt == OutputFormat.CSV:
        lines = ["check,status,expected,actual"]
        for check in report.checks:
            status = "PASS" if check.passed else "FAIL"
            lines.append(f"{check.name},{status},{check.expected or ''},{check.actual or ''}")
        return "\n".join(lines) + "\n"

    lines = []
    for check in report.checks:
        if check.passed:
            lines.append(f"PASS  {check.name}")
        else:
            lines.append(f"FAIL  {check.name}: expected {check.expected}, got {check.actual}")
        if check.detail:
            lines.append(f"      {check.detail}")
    failed = len(report.failures)
    lines.append("")
    lines.append(f"{len(report.checks) - failed} passed, {failed} failed")
    return "\n".join(lines) + "\n"


def write_output(text: str, path: Path | str) -> Path:
    """Write rendered output, creating parent directories."""
    path = Path(path)
    ensure_directory(path.parent)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    get_logger().info(f"Wrote output to {path}")
    return path
