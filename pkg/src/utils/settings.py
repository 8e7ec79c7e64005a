"""
Numerical settings for shrinkage-lab

Loads tolerances, quadrature controls and default Monte Carlo sizes from
config/shrinkage_lab.yaml, falling back to built-in defaults.
"""

import os
import logging
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field

logger = logging.getLogger(__name__)

DEFAULT_SETTINGS_PATH = Path(__file__).resolve().parents[2] / "config" / "shrinkage_lab.yaml"


class NumericalSettings(BaseModel):
    """Tolerances and sizes shared by every module."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    symmetry_rtol: float = Field(1e-12, gt=0)
    definiteness_floor_rel: float = Field(1e-10, gt=0)
    loewner_tol: float = Field(1e-10, gt=0)
    astar_unit_tol: float = Field(1e-9, gt=0)
    quadrature_epsrel: float = Field(1e-8, gt=0)
    quadrature_tail_exponent: float = Field(200.0, gt=0)
    quadrature_chunk: int = Field(2048, ge=1)
    quadrature_limit: int = Field(2000, ge=10)
    radial_mc_draws: int = Field(4096, ge=16)
    radial_mc_seed: int = Field(20240607, ge=0)
    fd_step: float = Field(1e-5, gt=0)
    condition_cap: float = Field(1e12, gt=1)
    pole_radius: float = Field(1e-12, gt=0)
    min_acceptance: float = Field(1e-4, gt=0, lt=1)
    rejection_batch: int = Field(4096, ge=1)
    desk_outer_reps: int = Field(1000, ge=2)
    paper_outer_reps: int = Field(10000, ge=2)
    desk_mc_n: int = Field(10000, ge=2)


def _get_default_config() -> Dict[str, Any]:
    """Get default configuration if the settings file is not available."""
    return NumericalSettings().model_dump()


def _load_config(config_path: Path) -> Dict[str, Any]:
    """Load the numerical section of the settings YAML."""
    try:
        with open(config_path, "r") as file:
            raw = yaml.safe_load(file) or {}
        return raw.get("numerics", {})
    except Exception as e:
        logger.error(f"Error loading settings from {config_path}: {e}")
        return _get_default_config()


def load_settings(config_path: Optional[str] = None) -> NumericalSettings:
    """Build settings from a YAML file.

    Args:
        config_path: Path to a settings YAML; defaults to SHRINKAGE_LAB_CONFIG
            or config/shrinkage_lab.yaml

    Returns:
        Validated settings
    """
    path = Path(config_path or os.getenv("SHRINKAGE_LAB_CONFIG") or DEFAULT_SETTINGS_PATH)
    return NumericalSettings(**_load_config(path))


@lru_cache(maxsize=1)
def get_settings() -> NumericalSettings:
    """Process-wide settings, loaded once."""
    return load_settings()
