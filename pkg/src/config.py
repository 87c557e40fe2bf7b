"""Run configuration for the verify, solve and fuchsian commands."""

import hashlib
from pathlib import Path
from typing import List, Literal, Optional, Tuple

import orjson
import yaml
from pydantic import BaseModel, Field, ValidationError

from .errors import ConfigError


class SuiteConfig(BaseModel):
    """Which invariant suites `verify` runs."""

    octonion: bool = True
    g2: bool = True
    ein: bool = True
    fuchsian: bool = True
    hitchin: bool = True


class ToleranceConfig(BaseModel):
    """Float tolerances; 0 is accepted and makes every float check fail."""

    algebra: float = Field(default=1e-10, ge=0)
    g2: float = Field(default=1e-10, ge=0)
    null: float = Field(default=1e-12, ge=0)
    frame: float = Field(default=1e-12, ge=0)
    equivariance: float = Field(default=1e-9, ge=0)
    immersion: float = Field(default=1e-6, ge=0)
    rank_drop: float = Field(default=1e-8, ge=0)
    fiber_match: float = Field(default=1e-6, ge=0)
    cross_frame: float = Field(default=1e-9, ge=0)
    bound_slack: float = Field(default=1e-9, ge=0)
    closed_form: float = Field(default=1e-10, ge=0)
    residual_oracle: float = Field(default=1e-13, ge=0)
    sensitivity_match: float = Field(default=0.01, ge=0)


class SamplingConfig(BaseModel):
    """Trial counts, the RNG seed and the Fuchsian sample grids."""

    seed: int = 0
    octonion_pairs: int = Field(default=1000, ge=1)
    annihilator_samples: int = Field(default=500, ge=1)
    g2_triples: int = Field(default=200, ge=1)
    curve_points: int = Field(default=100, ge=1)
    dev_samples: int = Field(default=1000, ge=1)
    osculating_pairs: int = Field(default=100, ge=1)
    degenerate_t: int = Field(default=20, ge=1)
    sextics: int = Field(default=100, ge=1)
    frame_points: int = Field(default=50, ge=1)
    oracle_fields: int = Field(default=100, ge=1)
    fiber_base: Tuple[float, float] = (0.0, 1.0)
    fiber_theta_steps: int = Field(default=12, ge=1)
    fiber_alpha_steps: int = Field(default=12, ge=1)
    fiber_radii: List[float] = Field(default_factory=lambda: [0.5, 1.0, 2.0])
    t_min: float = Field(default=0.1, gt=0)
    t_max: float = Field(default=4.0, gt=0)
    t_steps: int = Field(default=40, ge=2)


class GridConfig(BaseModel):
    """PDE instances solved by `solve`."""

    instances: List[Literal["hyperbolic", "flat", "perturbed"]] = Field(
        default_factory=lambda: ["hyperbolic", "flat", "perturbed"]
    )
    nx: int = Field(default=64, ge=3)
    ny: int = Field(default=64, ge=3)
    q0: float = Field(default=1.0, gt=0)
    epsilon: float = 0.0
    perturbation: float = Field(default=0.2, gt=-1, lt=1)
    initial: Tuple[float, float] = (0.0, 0.0)
    random_initial: bool = True
    discrete_kappa: bool = False
    newton_tol: float = Field(default=1e-10, gt=0)
    max_iter: int = Field(default=30, ge=1)
    sensitivity_eps: List[float] = Field(default_factory=lambda: [1e-2, 1e-3, 1e-4])


class OutputConfig(BaseModel):
    """Output directory and file names."""

    directory: str = "results"
    verify_report: str = "verify_report.json"
    solve_report: str = "solve_report.json"
    fuchsian_report: str = "fuchsian_report.json"
    fields_csv: str = "fields_{label}.csv"
    fiber_csv: str = "fiber_samples.csv"
    classification_csv: str = "sextic_classes.csv"
    sign_table_csv: str = "q6_sign_table.csv"


class Settings(BaseModel):
    """Main run settings."""

    suites: SuiteConfig = Field(default_factory=SuiteConfig)
    tolerances: ToleranceConfig = Field(default_factory=ToleranceConfig)
    sampling: SamplingConfig = Field(default_factory=SamplingConfig)
    grid: GridConfig = Field(default_factory=GridConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)


class Config:
    """Configuration manager."""

    def __init__(self, config_path: Optional[Path] = None):
        """
        Initialize configuration.

        Args:
            config_path: Path to settings.yaml file

        Raises:
            ConfigError: File is not valid YAML or does not validate
        """
        if config_path is None:
            config_path = Path(__file__).parent.parent / "config" / "settings.yaml"

        self.config_path = Path(config_path)
        self.settings = self._load_settings()

    def _load_settings(self) -> Settings:
        """Load settings from YAML file."""
        if not self.config_path.exists():
            # Return defaults if file doesn't exist
            return Settings()

        try:
            with open(self.config_path, "r") as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as exc:
            raise ConfigError(f"{self.config_path}: not valid YAML ({exc})") from exc

        if data is None:
            return Settings()
        if not isinstance(data, dict):
            raise ConfigError(f"{self.config_path}: expected a mapping at the top level")
        try:
            return Settings(**data)
        except ValidationError as exc:
            raise ConfigError(f"{self.config_path}: {exc}") from exc

    def save(self) -> None:
        """Save current settings to file."""
        self.config_path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.config_path, "w") as f:
            yaml.dump(self.settings.model_dump(mode="json"), f, default_flow_style=False)

    @property
    def config_hash(self) -> str:
        """SHA-256 of the settings, independent of key order."""
        return settings_hash(self.settings)

    def apply_overrides(self, seed: Optional[int] = None, out: Optional[Path] = None) -> None:
        """Command-line overrides for the seed and output directory."""
        if seed is not None:
            self.settings.sampling.seed = seed
        if out is not None:
            self.settings.output.directory = str(out)


def settings_hash(settings: Settings) -> str:
    """Output locations do not affect any emitted number and are left out."""
    data = settings.model_dump(mode="json", exclude={"output"})
    payload = orjson.dumps(data, option=orjson.OPT_SORT_KEYS)
    return hashlib.sha256(payload).hexdigest()

