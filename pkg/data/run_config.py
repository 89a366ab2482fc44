"""
Run configuration for the command-line tools.

A RunConfig is assembled from three layers, highest priority first:
command-line flags, a --config file (flat JSON or YAML mapping of the
field names below) and the defaults in config.yaml.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Literal

import numpy as np
import yaml

from calculations.errors import ConfigError, DomainError
from calculations.fgm_joint import BleFgmParams

logger = logging.getLogger(__name__)

FIELD_NAMES = (
    "alpha1",
    "beta1",
    "alpha2",
    "beta2",
    "lambda",
    "lambda_list",
    "grid_x",
    "grid_y",
    "seed",
    "replications",
    "output_path",
    "format",
)

OutputFormat = Literal["csv", "json"]


@dataclass(frozen=True)
class AxisSpec:
    """Evenly spaced axis from ``lo`` to ``hi`` with ``count`` points."""

    lo: float
    hi: float
    count: int

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)

    def __str__(self) -> str:
        return f"{self.lo:g}:{self.hi:g}:{self.count}"


def parse_axis(text: Any, name: str = "grid") -> AxisSpec:
    """
    Parse ``"min:max:count"`` (or an already split 3-sequence).

    Raises:
        ConfigError: malformed text, count < 2, negative min or max <= min.
    """
    parts = text if isinstance(text, (list, tuple)) else str(text).split(":")
    if len(parts) != 3:
        raise ConfigError(f"{name} must look like min:max:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"{name} has a non-numeric part: {text!r}") from exc
    if count < 2:
        raise ConfigError(f"{name} needs at least 2 points, got {count}")
    if lo < 0 or hi <= lo:
        raise ConfigError(f"{name} needs 0 <= min < max, got {lo}:{hi}")
    return AxisSpec(lo, hi, count)


def parse_lambda_list(value: Any) -> tuple[float, ...] | None:
    if value is None:
        return None
    items = value if isinstance(value, (list, tuple)) else str(value).split(",")
    try:
        lams = tuple(float(item) for item in items if str(item).strip() != "")
    except ValueError as exc:
        raise ConfigError(f"lambda list has a non-numeric entry: {value!r}") from exc
    if not lams:
        raise ConfigError("lambda list is empty")
    bad = [lam for lam in lams if not -1.0 <= lam <= 1.0]
    if bad:
        raise ConfigError(f"every lambda must satisfy |lambda| <= 1, got {bad}")
    return lams


@dataclass(frozen=True)
class RunConfig:
    params: BleFgmParams
    lambda_list: tuple[float, ...] | None
    grid_x: AxisSpec
    grid_y: AxisSpec
    seed: int
    replications: int
    output_path: str
    format: OutputFormat

    @property
    def lambdas(self) -> tuple[float, ...]:
        """The sweep to evaluate: lambda_list, or just the single lambda."""
        return self.lambda_list if self.lambda_list else (self.params.lam,)

    def params_for(self, lam: float) -> BleFgmParams:
        return self.params.with_lambda(lam)


@dataclass(frozen=True)
class CommandContext:
    """What every command receives through click's ``ctx.obj``."""

    run: RunConfig
    defaults: dict
    progress: bool = False


# ---------------------------------------------------------------------------
# Layer loading and merging
# ---------------------------------------------------------------------------


def load_config_file(path: str | Path) -> dict:
    """Read a flat JSON/YAML mapping of RunConfig field names."""
    try:
        with open(path, "r") as f:
            data = yaml.safe_load(f)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"config file {path} is not valid JSON/YAML: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a mapping")
    unknown = sorted(set(data) - set(FIELD_NAMES))
    if unknown:
        raise ConfigError(f"unknown config keys in {path}: {', '.join(unknown)}")
    return data


def defaults_layer(config: dict) -> dict:
    """Flatten config.yaml into RunConfig field names."""
    layer = dict(config.get("params", {}))
    for key in FIELD_NAMES:
        if key in config and key not in layer:
            layer[key] = config[key]
    return layer


def merge_layers(*layers: dict) -> dict:
    """Later layers win; None values never override."""
    merged: dict = {}
    for layer in layers:
        merged.update({k: v for k, v in layer.items() if v is not None})
    return merged


def build_run_config(
    flags: dict, config_file: str | Path | None, defaults: dict
) -> RunConfig:
    """
    Assemble a validated RunConfig.

    Args:
        flags: Command-line values keyed by field name (None = not given).
        config_file: Optional path of a --config file.
        defaults: The parsed config.yaml.

    Returns:
        RunConfig.

    Raises:
        ConfigError: any layer violates the RunConfig invariants.
    """
    file_layer = load_config_file(config_file) if config_file else {}
    merged = merge_layers(defaults_layer(defaults), file_layer, flags)

    missing = [k for k in ("alpha1", "beta1", "alpha2", "beta2", "lambda") if k not in merged]
    if missing:
        raise ConfigError(f"missing parameters: {', '.join(missing)}")
    try:
        params = BleFgmParams.from_rates(
            float(merged["alpha1"]),
            float(merged["beta1"]),
            float(merged["alpha2"]),
            float(merged["beta2"]),
            float(merged["lambda"]),
        )
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"parameters must be numeric: {exc}") from exc

    replications = int(merged.get("replications", 1))
    if replications < 1:
        raise ConfigError(f"replications must be >= 1, got {replications}")
    fmt = str(merged.get("format", "csv")).lower()
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {fmt!r}")

    config = RunConfig(
        params=params,
        lambda_list=parse_lambda_list(merged.get("lambda_list")),
        grid_x=parse_axis(merged.get("grid_x", "0:4:41"), "grid_x"),
        grid_y=parse_axis(merged.get("grid_y", "0:4:41"), "grid_y"),
        seed=int(merged.get("seed", 0)),
        replications=replications,
        output_path=str(merged.get("output_path", "-")),
        format=fmt,
    )
    logger.debug("run config: %s", config)
    return config
