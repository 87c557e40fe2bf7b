"""
Tests for check constructors, report status and the JSON/CSV emitters.
"""

import math
import tempfile
from pathlib import Path

import pytest

from src.reports import (
    FIELD_HEADER,
    Provenance,
    Report,
    SolveSummary,
    above,
    below,
    holds,
    load_report,
    read_csv,
    report_bytes,
    write_csv,
    write_report,
)


@pytest.fixture
def tmp_dir():
    """Temporary directory removed after the test."""
    with tempfile.TemporaryDirectory() as d:
        yield Path(d)


@pytest.fixture
def provenance():
    """Fixed provenance block."""
    return Provenance(command="verify", config_hash="0" * 64, seed=3)


def test_below_is_strict():
    assert below("a", 0.5, 1.0).passed
    assert not below("a", 1.0, 1.0).passed
    assert not below("a", 0.0, 0.0).passed, "a zero tolerance always fails"


def test_above_and_holds():
    assert above("a", 2.0, 1.0).passed
    assert not above("a", 1.0, 1.0).passed
    assert holds("h", True).passed
    assert not holds("h", False, "detail").passed


def test_status_follows_checks(provenance):
    report = Report(suite="verify", provenance=provenance, checks=[holds("a", True)])
    assert report.status == "pass" and report.passed
    report.checks.append(holds("b", False))
    assert report.status == "fail"
    assert [c.name for c in report.failures()] == ["b"]


def test_empty_report_passes(provenance):
    assert Report(suite="solve", provenance=provenance).passed


def test_json_has_sorted_keys_and_no_nan(provenance, tmp_dir):
    summary = SolveSummary(
        label="flat",
        mode="periodic",
        nx=4,
        ny=4,
        synthetic=False,
        converged=False,
        iterations=0,
        residual=math.nan,
    )
    report = Report(suite="solve", provenance=provenance, solves=[summary])
    path = write_report(report, tmp_dir / "nested" / "report.json")
    data = load_report(path)
    assert data["status"] == "pass"
    assert data["schema_version"] == "1.0"
    assert data["provenance"]["seed"] == 3
    assert data["solves"][0]["residual"] == "nan"
    text = report_bytes(report).decode("utf-8")
    assert text.index('"checks"') < text.index('"provenance"') < text.index('"suite"')


def test_csv_layout(tmp_dir):
    path = write_csv(tmp_dir / "f.csv", FIELD_HEADER, [(0, 1, 0.0, 0.5, None, 2.0)])
    raw = path.read_bytes()
    assert raw.startswith(b"ix,iy,x,y,psi1,psi2\r\n")
    rows = read_csv(path)
    assert rows == [{"ix": "0", "iy": "1", "x": "0.0", "y": "0.5", "psi1": "", "psi2": "2.0"}]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
