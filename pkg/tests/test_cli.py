"""
End-to-end tests of the verify, solve and fuchsian commands on small configurations.
"""

import re
import tempfile
from pathlib import Path

import pytest
import yaml
from typer.testing import CliRunner

from src.main import EXIT_FAILED, EXIT_INPUT, app
from src.reports import (
    CLASSIFICATION_HEADER,
    FIBER_HEADER,
    FIELD_HEADER,
    SIGN_TABLE_HEADER,
    load_report,
    read_csv,
)

runner = CliRunner()

DEFAULT_CONFIG = Path(__file__).parent.parent / "config" / "settings.yaml"

SMALL_SAMPLING = {
    "octonion_pairs": 20,
    "annihilator_samples": 10,
    "g2_triples": 5,
    "curve_points": 5,
    "dev_samples": 5,
    "osculating_pairs": 5,
    "degenerate_t": 3,
    "sextics": 3,
    "frame_points": 5,
    "fiber_theta_steps": 3,
    "fiber_alpha_steps": 2,
    "fiber_radii": [1.0],
    "t_min": 0.5,
    "t_max": 4.0,
    "t_steps": 3,
}


@pytest.fixture
def tmp_dir():
    """Temporary directory removed after the test."""
    with tempfile.TemporaryDirectory() as d:
        yield Path(d)


def write_config(directory: Path, suites=None, grid=None, tolerances=None) -> Path:
    """Small settings file; only the octonion suite is enabled unless `suites` says otherwise."""
    data = {
        "suites": suites
        or {"octonion": True, "g2": False, "ein": False, "fuchsian": False, "hitchin": False},
        "sampling": SMALL_SAMPLING,
        "grid": grid
        or {"instances": ["hyperbolic"], "nx": 10, "ny": 10, "random_initial": False},
    }
    if tolerances:
        data["tolerances"] = tolerances
    path = directory / "settings.yaml"
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    return path


def invoke(command: str, config: Path, out: Path, *extra: str):
    return runner.invoke(app, [command, "--config", str(config), "--out", str(out), *extra])


def test_verify_passes(tmp_dir):
    out = tmp_dir / "results"
    result = invoke("verify", write_config(tmp_dir), out)
    assert result.exit_code == 0, result.output
    report = load_report(out / "verify_report.json")
    assert report["status"] == "pass"
    assert report["suite"] == "verify"
    assert all(c["name"].startswith("octonion.") for c in report["checks"])


def test_verify_fails_with_zero_tolerance(tmp_dir):
    out = tmp_dir / "results"
    config = write_config(tmp_dir, tolerances={"algebra": 0.0})
    result = invoke("verify", config, out)
    assert result.exit_code == EXIT_FAILED
    report = load_report(out / "verify_report.json")
    assert report["status"] == "fail"
    failed = [c["name"] for c in report["checks"] if not c["passed"]]
    assert "octonion.omega_invariance" in failed


def report_without_timestamp(path: Path) -> str:
    return re.sub(r'"timestamp": "[^"]*"', '"timestamp": ""', path.read_text(encoding="utf-8"))


def test_verify_is_deterministic_per_seed(tmp_dir):
    config = write_config(tmp_dir)
    invoke("verify", config, tmp_dir / "a", "--seed", "4")
    invoke("verify", config, tmp_dir / "b", "--seed", "4")
    first = tmp_dir / "a" / "verify_report.json"
    second = tmp_dir / "b" / "verify_report.json"
    assert report_without_timestamp(first) == report_without_timestamp(second)
    assert load_report(first)["provenance"]["seed"] == 4


def test_solve_is_deterministic(tmp_dir):
    grid = {"instances": ["hyperbolic", "perturbed"], "nx": 10, "ny": 10}
    config = write_config(tmp_dir, grid=grid)
    for name in ("a", "b"):
        result = invoke("solve", config, tmp_dir / name, "--seed", "3")
        assert result.exit_code == 0, result.output
    first, second = tmp_dir / "a", tmp_dir / "b"
    assert report_without_timestamp(first / "solve_report.json") == report_without_timestamp(
        second / "solve_report.json"
    )
    for csv_name in ("fields_hyperbolic.csv", "fields_conformal-torus.csv"):
        assert (first / csv_name).read_bytes() == (second / csv_name).read_bytes()


def test_default_solve_passes(tmp_dir):
    """Shipped settings: 64x64 grids, random hyperbolic start, all three instances."""
    out = tmp_dir / "results"
    result = invoke("solve", DEFAULT_CONFIG, out)
    assert result.exit_code == 0, result.output
    report = load_report(out / "solve_report.json")
    assert report["status"] == "pass"
    labels = [s["label"] for s in report["solves"]]
    assert labels == ["hyperbolic", "flat", "conformal-torus"]
    for summary in report["solves"]:
        assert summary["violations"] == 0, summary["label"]
        assert summary["closed_form_error"] < 1e-10, summary["label"]
    hyperbolic = report["solves"][0]
    assert hyperbolic["iterations"] <= 12
    assert hyperbolic["strict"]


def test_missing_config_is_input_error(tmp_dir):
    result = invoke("verify", tmp_dir / "absent.yaml", tmp_dir / "out")
    assert result.exit_code == EXIT_INPUT
    assert not (tmp_dir / "out").exists()


def test_invalid_config_is_input_error(tmp_dir):
    config = write_config(tmp_dir, grid={"nx": 1})
    assert invoke("solve", config, tmp_dir / "out").exit_code == EXIT_INPUT


def test_solve_hyperbolic(tmp_dir):
    out = tmp_dir / "results"
    result = invoke("solve", write_config(tmp_dir), out)
    assert result.exit_code == 0, result.output
    report = load_report(out / "solve_report.json")
    summary = report["solves"][0]
    assert summary["label"] == "hyperbolic"
    assert summary["converged"] and summary["strict"]
    assert summary["closed_form_error"] == 0.0
    rows = read_csv(out / "fields_hyperbolic.csv")
    assert len(rows) == 100
    assert tuple(rows[0].keys()) == FIELD_HEADER
    assert report["files"] == ["fields_hyperbolic.csv", "solve_report.json"]


def test_solve_reports_iteration_cap(tmp_dir):
    out = tmp_dir / "results"
    grid = {"instances": ["flat"], "nx": 8, "ny": 8, "max_iter": 1}
    result = invoke("solve", write_config(tmp_dir, grid=grid), out)
    assert result.exit_code == EXIT_FAILED
    summary = load_report(out / "solve_report.json")["solves"][0]
    assert not summary["converged"]
    assert summary["error"]


def test_fuchsian_outputs(tmp_dir):
    out = tmp_dir / "results"
    result = invoke("fuchsian", write_config(tmp_dir), out)
    assert result.exit_code == 0, result.output
    fiber = read_csv(out / "fiber_samples.csv")
    assert len(fiber) == 3 * 2 * 1
    assert tuple(fiber[0].keys()) == FIBER_HEADER
    classes = read_csv(out / "sextic_classes.csv")
    assert tuple(classes[0].keys()) == CLASSIFICATION_HEADER
    assert [row["source"] for row in classes[-6:]] == [
        "K1",
        "K2",
        "K3",
        "K4",
        "K5",
        "three_quadratics",
    ]
    signs = read_csv(out / "q6_sign_table.csv")
    assert tuple(signs[0].keys()) == SIGN_TABLE_HEADER
    assert [row["count"] for row in signs] == ["0", "0", "2"]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
