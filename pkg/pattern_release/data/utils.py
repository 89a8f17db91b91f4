"""Experiment configuration: packaged defaults, user files and overrides."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml

from pattern_release.data.synthetic import SyntheticSpec
from pattern_release.logger import pr_logger
from pattern_release.noise import MAX_SEED, ScaleMode
from pattern_release.series import PrivacyBudget, Thresholds

pr_log = pr_logger(__name__)

SYNTHETIC = "synthetic"

# expected type of every key of a flat config file
CONFIG_TYPES: dict[str, type | tuple[type, ...]] = {
    "input": str,
    "window": int,
    "t_d": (int, float),
    "t_l": int,
    "t_r": (int, float),
    "eps1": (int, float),
    "eps2": (int, float),
    "alpha": (int, float),
    "baseline_t_d_variants": list,
    "trials": int,
    "base_seed": int,
    "zero_noise": bool,
    "scale_mode": str,
    "delta_floor": (int, float),
    "clamp": bool,
    "strict_detection": bool,
    "timing": bool,
    "synthetic_length": int,
    "synthetic_base_level": (int, float),
    "synthetic_walk_step_sd": (int, float),
    "synthetic_jump_count": int,
    "synthetic_jump_magnitude_range": list,
    "synthetic_value_clip": list,
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one comparative run needs.

    ``input`` is either ``"synthetic"`` (a new series per trial, seeded with
    the trial seed) or the path to a raw CSV series used for every trial.
    """

    input: str
    window: int
    thresholds: Thresholds
    budget: PrivacyBudget
    baseline_t_d_variants: tuple[float, ...]
    trials: int
    base_seed: int
    zero_noise: bool
    scale_mode: ScaleMode
    delta_floor: float
    clamp: bool
    synthetic: SyntheticSpec
    strict_detection: bool = False
    timing: bool = False

    @property
    def is_synthetic(self) -> bool:
        return self.input == SYNTHETIC


def _data_dir() -> Path:
    return Path(__file__).parent


def default_config_file() -> Path:
    return _data_dir() / "experiment.yml"


@functools.lru_cache(maxsize=1)
def default_config() -> dict[str, Any]:
    """Return the packaged default configuration."""
    with open(default_config_file()) as f:
        return yaml.safe_load(f)


def load_config_file(config_file: Path | str) -> dict[str, Any]:
    config_file = Path(config_file).resolve()
    if not config_file.exists():
        raise FileNotFoundError(f"Could not find config file at '{config_file}'")
    with open(config_file) as f:
        content = yaml.safe_load(f) or {}
    if not isinstance(content, dict):
        raise TypeError(f"Config file at '{config_file}' must contain a flat key-value mapping.")
    return content


def validate_config(config: dict[str, Any], source: str = "config") -> None:
    for key, value in config.items():
        if key not in CONFIG_TYPES:
            raise ValueError(
                f"Unknown key '{key}' in {source}.\nKnown keys are: {sorted(CONFIG_TYPES)}"
            )
        expected = CONFIG_TYPES[key]
        # bool is an int: only accept it where a bool is expected
        if (isinstance(value, bool) and expected is not bool) or not isinstance(value, expected):
            raise TypeError(f"Value of '{key}' in {source} has the wrong type: {value!r}.")
    for key in ("baseline_t_d_variants", "synthetic_jump_magnitude_range", "synthetic_value_clip"):
        if key in config and not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in config[key]
        ):
            raise TypeError(f"All values of '{key}' in {source} must be numbers.")
    for key in ("synthetic_jump_magnitude_range", "synthetic_value_clip"):
        if key in config and len(config[key]) != 2:
            raise ValueError(f"'{key}' in {source} must have exactly 2 values.")


def build_experiment_config(
    config_file: Path | str | None = None, overrides: dict[str, Any] | None = None
) -> ExperimentConfig:
    """Merge packaged defaults, an optional config file and overrides.

    Overrides set to ``None`` are ignored, so parsed CLI arguments can be
    passed as they are.
    """
    config = dict(default_config())
    validate_config(config, source="default config")

    if config_file is not None:
        content = load_config_file(config_file)
        validate_config(content, source=f"'{config_file}'")
        config.update(content)

    if overrides:
        overrides = {key: value for key, value in overrides.items() if value is not None}
        validate_config(overrides, source="command line arguments")
        config.update(overrides)

    if config["trials"] < 1:
        raise ValueError(f"'trials' must be at least 1, got {config['trials']}.")
    if config["window"] < 1:
        raise ValueError(f"'window' must be at least 1, got {config['window']}.")
    if not 0 <= config["base_seed"] <= MAX_SEED - config["trials"]:
        raise ValueError(f"'base_seed' + trials must fit in 64 bits, got {config['base_seed']}.")
    if config["delta_floor"] <= 0:
        raise ValueError(f"'delta_floor' must be positive, got {config['delta_floor']}.")
    if config["input"] != SYNTHETIC and not Path(config["input"]).exists():
        raise FileNotFoundError(f"Could not find input series at '{config['input']}'")

    return ExperimentConfig(
        input=config["input"],
        window=config["window"],
        thresholds=Thresholds(t_d=config["t_d"], t_l=config["t_l"], t_r=config["t_r"]),
        budget=PrivacyBudget(eps1=config["eps1"], eps2=config["eps2"], alpha=config["alpha"]),
        baseline_t_d_variants=tuple(float(x) for x in config["baseline_t_d_variants"]),
        trials=config["trials"],
        base_seed=config["base_seed"],
        zero_noise=config["zero_noise"],
        scale_mode=ScaleMode(config["scale_mode"]),
        delta_floor=float(config["delta_floor"]),
        clamp=config["clamp"],
        synthetic=SyntheticSpec(
            length=config["synthetic_length"],
            base_level=config["synthetic_base_level"],
            walk_step_sd=config["synthetic_walk_step_sd"],
            jump_count=config["synthetic_jump_count"],
            jump_magnitude_range=tuple(config["synthetic_jump_magnitude_range"]),
            value_clip=tuple(config["synthetic_value_clip"]),
            seed=config["base_seed"],
        ),
        strict_detection=config["strict_detection"],
        timing=config["timing"],
    )
