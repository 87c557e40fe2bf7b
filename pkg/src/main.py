"""Main application entry point with CLI."""

from pathlib import Path
from typing import Callable, Optional

import typer
from rich.console import Console

from .config import Config
from .errors import ConfigError, G2EinError
from .reports import Report, print_summary
from .suites import run_fuchsian, run_solve, run_verify

console = Console()
app = typer.Typer(help="Split octonions, G2' and Ein^{2,3} geometry, cyclic G2' Hitchin solver.")

EXIT_FAILED = 1
EXIT_INPUT = 2

ConfigOption = typer.Option(None, "--config", help="Path to settings.yaml")
SeedOption = typer.Option(None, "--seed", help="Override sampling.seed")
OutOption = typer.Option(None, "--out", help="Override the output directory")


def load_config(
    config_path: Optional[Path], seed: Optional[int] = None, out: Optional[Path] = None
) -> Config:
    """
    Load settings and apply command-line overrides.

    Raises:
        ConfigError: Explicit config path missing, unreadable or invalid
    """
    if config_path is not None and not Path(config_path).exists():
        raise ConfigError(f"{config_path}: no such file")
    config = Config(config_path)
    config.apply_overrides(seed=seed, out=out)
    return config


def _run(
    runner: Callable[[Config], Report],
    config_path: Optional[Path],
    seed: Optional[int],
    out: Optional[Path],
) -> None:
    try:
        config = load_config(config_path, seed, out)
    except ConfigError as exc:
        console.print(f"[red]Config error:[/red] {exc}")
        raise typer.Exit(code=EXIT_INPUT)

    try:
        report = runner(config)
    except G2EinError as exc:
        console.print(f"[red]Invalid input:[/red] {exc}")
        raise typer.Exit(code=EXIT_INPUT)

    print_summary(report)
    written = ", ".join(report.files)
    console.print(f"Wrote {written} to {config.settings.output.directory}")
    if not report.passed:
        console.print(f"[red]✗ {len(report.failures())} check(s) failed[/red]")
        raise typer.Exit(code=EXIT_FAILED)
    console.print("[green]✓ all checks passed[/green]")


@app.command()
def verify(
    config: Optional[Path] = ConfigOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
):
    """
    Run the invariant suites (octonions, G2', Ein^{2,3}, Fuchsian curve, Hitchin pointwise).

    Exit code 0 when every check passes, 1 when any fails, 2 on bad input.
    """
    _run(run_verify, config, seed, out)


@app.command()
def solve(
    config: Optional[Path] = ConfigOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
):
    """Solve the configured PDE instances and check the global bounds on each solution."""
    _run(run_solve, config, seed, out)


@app.command()
def fuchsian(
    config: Optional[Path] = ConfigOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
):
    """Sample a developed fiber, classify sextics and tabulate the sign of Q₆(w)."""
    _run(run_fuchsian, config, seed, out)


if __name__ == "__main__":
    app()
