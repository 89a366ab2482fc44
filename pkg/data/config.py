"""
Defaults loader for config.yaml.

The file is read once per process and cached.
"""

import logging
from pathlib import Path

import yaml

from calculations.numerics import QuadratureSpec, StepSpec

logger = logging.getLogger(__name__)

_CONFIG_PATH = Path(__file__).parent.parent / "config.yaml"


def _load_config() -> dict:
    """Load configuration from config.yaml."""
    with open(_CONFIG_PATH, "r") as f:
        config = yaml.safe_load(f)
    logger.debug("loaded defaults from %s", _CONFIG_PATH)
    return config


_config_cache: dict | None = None


def get_config() -> dict:
    """Get the cached config, loading once on first call."""
    global _config_cache
    if _config_cache is None:
        _config_cache = _load_config()
    return _config_cache


def quadrature_spec(config: dict) -> QuadratureSpec:
    """Quadrature tolerances from the ``quadrature`` section."""
    quad_cfg = config.get("quadrature", {})
    return QuadratureSpec(
        abs_tol=float(quad_cfg.get("abs_tol", 1e-10)),
        rel_tol=float(quad_cfg.get("rel_tol", 1e-8)),
        max_subdivisions=int(quad_cfg.get("max_subdivisions", 2**15)),
    )


def series_cap(config: dict) -> int:
    """Term cap shared by every guarded series."""
    return int(config.get("series", {}).get("cap", 40))


def step_spec(config: dict) -> StepSpec:
    """Relative finite-difference steps used by the validation suite."""
    fd_cfg = config.get("finite_differences", {})
    return StepSpec(
        rel_step=float(fd_cfg.get("rel_step", 1e-5)),
        rel_mixed_step=float(fd_cfg.get("rel_mixed_step", 3e-4)),
    )
