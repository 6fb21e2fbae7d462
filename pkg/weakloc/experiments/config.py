"""
Experiment configuration.

Every experiment is driven by one ``ExperimentConfig``. Values come from
the built-in defaults of the experiment, then an optional JSON file, then
explicit overrides (command-line flags), each layer deep-merged over the
previous one. Unknown keys are rejected at every level.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from weakloc.core.errors import ConfigError, LocalizationError, OperatorError
from weakloc.localization.weights import Weight, parse_weight
from weakloc.operators.symbols import Symbol, parse_symbol

ExperimentName = Literal["anti-wick", "calderon-toeplitz", "bergman"]

EXPERIMENTS: Tuple[str, ...] = ("anti-wick", "calderon-toeplitz", "bergman")

SPACES = {
    "anti-wick": "Euclidean2D",
    "calderon-toeplitz": "AffineGroup",
    "bergman": "BergmanDisc",
}

# symbol families each experiment accepts (descriptor prefix before ':')
ALLOWED_SYMBOLS = {
    "anti-wick": {"constant", "indicator", "lp", "oscillatory", "gaussian", "ball"},
    "calderon-toeplitz": {"constant", "ball"},
    "bergman": {"constant", "radial", "disc", "conj", "gaussian"},
}


class _Block(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GridConfig(_Block):
    resolution: float = Field(gt=0)
    truncation: float = Field(gt=0)

    @model_validator(mode="after")
    def _resolution_below_truncation(self) -> "GridConfig":
        if self.resolution >= self.truncation:
            raise ValueError(
                f"resolution {self.resolution} must be smaller than the truncation {self.truncation}"
            )
        return self


class FrameConfig(_Block):
    time_step: float = Field(default=0.05, gt=0)
    window_halfwidth: float = Field(default=7.0, gt=0)
    degree_cap: Optional[int] = Field(default=None, ge=1)
    degree_tolerance: float = Field(default=1e-6, gt=0, lt=1)
    condition_floor: float = Field(default=1e-8, gt=0, lt=1)
    parseval_tolerance: float = Field(default=0.05, gt=0)


class SweepConfig(_Block):
    cover_radii: List[float] = Field(min_length=1)
    epsilons: List[float] = Field(min_length=1)

    @field_validator("cover_radii")
    @classmethod
    def _radii(cls, value: List[float]) -> List[float]:
        if any(r <= 0 for r in value):
            raise ValueError("cover radii must be positive")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("cover radii must be strictly increasing")
        return value

    @field_validator("epsilons")
    @classmethod
    def _epsilons(cls, value: List[float]) -> List[float]:
        if any(not 0 < e < 1 for e in value):
            raise ValueError("every eps must lie in (0, 1)")
        if len(set(value)) != len(value):
            raise ValueError("eps values must be distinct")
        return sorted(value)


class ThresholdConfig(_Block):
    k0: int = Field(ge=1)
    singular_value_ratio: float = Field(default=0.01, gt=0, lt=1)
    berezin_threshold: float = Field(gt=0)
    boundary_fraction: float = Field(gt=0, lt=1)
    margin_cap: float = Field(default=10.0, gt=0)
    tail_floor: float = Field(default=0.05, gt=0)
    dense_svd_threshold: int = Field(default=2000, ge=1)


class HaarConfig(_Block):
    delta: float = 0.1
    second_truncation: float = Field(default=3.0, gt=0)
    stability_tolerance: float = Field(default=0.1, gt=0)
    pointwise_pairs: List[Tuple[float, float]] = Field(
        default_factory=lambda: [(0.6, 10.0), (0.75, 1000.0), (1.0, 1000.0)]
    )

    @field_validator("delta")
    @classmethod
    def _delta(cls, value: float) -> float:
        if not 0 < value < 0.5:
            raise ValueError(f"delta must lie in (0, 1/2), got {value}")
        return value

    @field_validator("pointwise_pairs")
    @classmethod
    def _pairs(cls, value: List[Tuple[float, float]]) -> List[Tuple[float, float]]:
        if any(M <= 0 or C <= 0 for M, C in value):
            raise ValueError("pointwise (M, C) pairs must be positive")
        return value


class BergmanConfig(_Block):
    basis_cap: int = Field(default=40, ge=2)
    hankel_tolerance: float = Field(default=1e-6, gt=0)
    diagonal_tolerance: float = Field(default=1e-10, gt=0)
    hankel_radii: int = Field(default=12, ge=2)


class ExperimentConfig(_Block):
    """Complete, validated parameter set for one experiment run."""
    experiment: ExperimentName
    grid: GridConfig
    frame: FrameConfig = Field(default_factory=FrameConfig)
    sweep: SweepConfig
    thresholds: ThresholdConfig
    symbol: str = "constant"
    weight: Optional[str] = None
    haar: HaarConfig = Field(default_factory=HaarConfig)
    bergman: BergmanConfig = Field(default_factory=BergmanConfig)
    seed: int = Field(default=0, ge=0)
    threads: int = Field(default=1, ge=1)
    output_dir: str = "./weakloc-out"
    run_name: Optional[str] = None

    @field_validator("symbol")
    @classmethod
    def _symbol_parses(cls, value: str) -> str:
        try:
            parse_symbol(value)
        except OperatorError as exc:
            raise ValueError(str(exc)) from exc
        return value.strip()

    @field_validator("weight")
    @classmethod
    def _weight_parses(cls, value: Optional[str]) -> Optional[str]:
        if value is None:
            return value
        try:
            parse_weight(value)
        except LocalizationError as exc:
            raise ValueError(str(exc)) from exc
        return value.strip()

    @model_validator(mode="after")
    def _symbol_fits_experiment(self) -> "ExperimentConfig":
        family = self.symbol.partition(":")[0].lower()
        allowed = ALLOWED_SYMBOLS[self.experiment]
        if family not in allowed:
            raise ValueError(
                f"symbol {self.symbol!r} is not available for {self.experiment}; "
                f"choose one of {sorted(allowed)}"
            )
        return self

    @property
    def space(self) -> str:
        return SPACES[self.experiment]

    @property
    def name(self) -> str:
        """Run directory name."""
        return self.run_name or self.experiment

    @property
    def boundary_band(self) -> float:
        return self.thresholds.boundary_fraction * self.grid.truncation

    def parsed_symbol(self) -> Symbol:
        return parse_symbol(self.symbol)

    def parsed_weight(self) -> Weight:
        """The configured weight, or the experiment's default weight."""
        if self.weight is not None:
            return parse_weight(self.weight)
        if self.experiment == "calderon-toeplitz":
            return Weight.power_affine(self.haar.delta)
        if self.experiment == "bergman":
            return Weight.power_disc(0.5)
        return Weight.constant()

    def report_dict(self) -> Dict[str, Any]:
        """The configuration as recorded in reports; run-environment fields are left out."""
        return self.model_dump(mode="json", exclude={"output_dir", "threads", "run_name"})


DEFAULTS: Dict[str, Dict[str, Any]] = {
    "anti-wick": {
        "experiment": "anti-wick",
        "grid": {"resolution": 0.25, "truncation": 6.0},
        "frame": {"time_step": 0.05, "window_halfwidth": 7.0},
        "sweep": {"cover_radii": [1.0, 2.0, 4.0], "epsilons": [0.1, 0.3]},
        "thresholds": {"k0": 60, "berezin_threshold": 0.02, "boundary_fraction": 0.2},
        "symbol": "indicator:1",
    },
    "calderon-toeplitz": {
        "experiment": "calderon-toeplitz",
        "grid": {"resolution": 0.35, "truncation": 2.5},
        "sweep": {"cover_radii": [0.7, 1.4], "epsilons": [0.1, 0.3]},
        "thresholds": {"k0": 30, "berezin_threshold": 0.2, "boundary_fraction": 0.1},
        "symbol": "ball:0.75",
    },
    "bergman": {
        "experiment": "bergman",
        "grid": {"resolution": 0.25, "truncation": 2.5},
        "sweep": {"cover_radii": [0.5, 1.0], "epsilons": [0.1, 0.3]},
        "thresholds": {
            "k0": 40, "berezin_threshold": 0.02, "boundary_fraction": 0.1, "tail_floor": 0.15,
        },
        "symbol": "radial:r2",
    },
}


def deep_merge(base: Mapping[str, Any], override: Mapping[str, Any]) -> Dict[str, Any]:
    """Recursive dict merge; values in ``override`` win, nested dicts merge."""
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), Mapping):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _validate(data: Mapping[str, Any]) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}" for err in exc.errors()
        )
        raise ConfigError(f"invalid experiment configuration: {problems}") from exc


def default_config(experiment: str) -> ExperimentConfig:
    if experiment not in DEFAULTS:
        raise ConfigError(f"unknown experiment {experiment!r}; choose one of {list(EXPERIMENTS)}")
    return _validate(DEFAULTS[experiment])


def read_config_file(path: Path) -> Dict[str, Any]:
    """Read a JSON configuration document."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return data


def load_config(
    experiment: str,
    path: Optional[Path] = None,
    overrides: Optional[Mapping[str, Any]] = None
) -> ExperimentConfig:
    """
    Build a config from defaults < JSON file < overrides.

    Args:
        experiment: Experiment name
        path: Optional JSON config file
        overrides: Nested dict of explicit values (e.g. from flags)

    Returns:
        Validated ExperimentConfig

    Raises:
        ConfigError: Unknown experiment, unreadable file or invalid values
    """
    if experiment not in DEFAULTS:
        raise ConfigError(f"unknown experiment {experiment!r}; choose one of {list(EXPERIMENTS)}")
    data = dict(DEFAULTS[experiment])
    if path is not None:
        from_file = read_config_file(path)
        if from_file.get("experiment", experiment) != experiment:
            raise ConfigError(
                f"config file is for {from_file['experiment']!r}, not {experiment!r}"
            )
        data = deep_merge(data, from_file)
    if overrides:
        data = deep_merge(data, overrides)
    return _validate(data)


def config_to_json(config: ExperimentConfig) -> str:
    return json.dumps(config.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"


def config_from_json(text: str) -> ExperimentConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return _validate(data)
