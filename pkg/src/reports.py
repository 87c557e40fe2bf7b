"""Report models, JSON/CSV emitters and the console summary."""

import csv
import math
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence

import orjson
from pydantic import BaseModel, Field, computed_field
from rich.console import Console
from rich.table import Table

from . import __version__

console = Console()

SCHEMA_VERSION = "1.0"

FIELD_HEADER = ("ix", "iy", "x", "y", "psi1", "psi2")
FIBER_HEADER = ("x", "y", "theta", "alpha", "r") + tuple(f"v{k}" for k in range(1, 8))
CLASSIFICATION_HEADER = (
    "index",
    "source",
    "is_null",
    "gw_member",
    "k_stratum",
    "omega_sector",
    "predicted_preimages",
    "brute_force_preimages",
    "real_roots",
    "complex_pairs",
)
SIGN_TABLE_HEADER = ("t", "q6_closed", "q6_direct", "sign", "count")


class CheckResult(BaseModel):
    """Outcome of one named check."""

    name: str
    passed: bool
    value: Optional[float] = None
    tol: Optional[float] = None
    detail: str = ""


class Provenance(BaseModel):
    """Where a report came from."""

    command: str
    config_hash: str
    seed: int
    timestamp: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    version: str = __version__


class SolveSummary(BaseModel):
    """One PDE instance: convergence, bound margins and closed-form comparison."""

    label: str
    mode: str
    nx: int
    ny: int
    synthetic: bool
    converged: bool
    iterations: int
    residual: float
    history: List[float] = Field(default_factory=list)
    steps: List[float] = Field(default_factory=list)
    first_margin: Optional[float] = None
    second_margin: Optional[float] = None
    det_gap: Optional[float] = None
    violations: Optional[int] = None
    strict: Optional[bool] = None
    psi_sup: Optional[float] = None
    closed_form_error: Optional[float] = None
    sensitivity_eps: List[float] = Field(default_factory=list)
    sensitivity_ratios: List[float] = Field(default_factory=list)
    stabilized: Optional[bool] = None
    expected_ratio: Optional[float] = None
    fields_csv: Optional[str] = None
    error: Optional[str] = None


class Report(BaseModel):
    """Result of one CLI command; fails iff any check fails."""

    schema_version: str = SCHEMA_VERSION
    suite: str
    provenance: Provenance
    checks: List[CheckResult] = Field(default_factory=list)
    solves: List[SolveSummary] = Field(default_factory=list)
    files: List[str] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)

    @computed_field
    @property
    def status(self) -> str:
        return "pass" if all(c.passed for c in self.checks) else "fail"

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]


# ---------------------------------------------------------------------------
# Check constructors
# ---------------------------------------------------------------------------


def below(name: str, value: float, tol: float, detail: str = "") -> CheckResult:
    """Passes when value < tol; a tolerance of 0 always fails."""
    value = float(value)
    return CheckResult(name=name, passed=bool(value < tol), value=value, tol=tol, detail=detail)


def above(name: str, value: float, tol: float, detail: str = "") -> CheckResult:
    """Passes when value > tol."""
    value = float(value)
    return CheckResult(name=name, passed=bool(value > tol), value=value, tol=tol, detail=detail)


def holds(name: str, ok: bool, detail: str = "", value: Optional[float] = None) -> CheckResult:
    """Exact (boolean) check."""
    return CheckResult(name=name, passed=bool(ok), value=value, detail=detail)


# ---------------------------------------------------------------------------
# Emitters
# ---------------------------------------------------------------------------


def _sanitize(data: Any) -> Any:
    """Non-finite floats become the strings "nan", "inf" and "-inf"."""
    if isinstance(data, float):
        if math.isnan(data):
            return "nan"
        if math.isinf(data):
            return "inf" if data > 0 else "-inf"
        return data
    if isinstance(data, dict):
        return {k: _sanitize(v) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [_sanitize(v) for v in data]
    return data


def report_bytes(report: Report) -> bytes:
    return orjson.dumps(
        _sanitize(report.model_dump()), option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS
    )


def write_report(report: Report, path: Path) -> Path:
    """
    Write a report as UTF-8 JSON with sorted keys.

    Args:
        report: Report to write
        path: Destination file

    Returns:
        The path written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(report_bytes(report) + b"\n")
    return path


def load_report(path: Path) -> dict:
    return orjson.loads(Path(path).read_bytes())


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """RFC 4180 CSV (CRLF line endings, minimal quoting) with a fixed header row."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow(["" if v is None else v for v in row])
    return path


def read_csv(path: Path) -> List[dict]:
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


# ---------------------------------------------------------------------------
# Console summary
# ---------------------------------------------------------------------------


def _fmt(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.3g}"


def print_summary(report: Report, out: Optional[Console] = None) -> None:
    """Rich tables of the checks and, for solve reports, the instances."""
    out = out or console
    table = Table(title=f"{report.suite} ({report.status})")
    table.add_column("Check")
    table.add_column("Status")
    table.add_column("Value", justify="right")
    table.add_column("Tol", justify="right")
    for check in report.checks:
        status = "[green]✓ pass[/green]" if check.passed else "[red]✗ fail[/red]"
        table.add_row(check.name, status, _fmt(check.value), _fmt(check.tol))
    out.print(table)

    if report.solves:
        solves = Table(title="Newton solves")
        columns = ("Instance", "Iter", "|R|∞", "Bound 1", "Bound 2", "det III gap", "Synthetic")
        for column in columns:
            solves.add_column(column)
        for s in report.solves:
            solves.add_row(
                s.label,
                str(s.iterations),
                _fmt(s.residual),
                _fmt(s.first_margin),
                _fmt(s.second_margin),
                _fmt(s.det_gap),
                "yes" if s.synthetic else "no",
            )
        out.print(solves)

    for note in report.notes:
        out.print(f"[yellow]{note}[/yellow]")
