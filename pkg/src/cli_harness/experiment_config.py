"""
Experiment configuration

A single JSON document per run, validated by pydantic. Unknown keys are
errors.
"""

import json
import logging
from pathlib import Path
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.priors import PriorSpec
from src.regression import DesignDistribution
from src.utils.errors import ConfigError

logger = logging.getLogger(__name__)

ExperimentTag = Literal["fit-lines", "predictive-cdf", "risk-curve", "compare-densities", "astar-surface", "selftest"]
STEIN_TYPES = ("stein", "rescaled_stein")


class ExperimentConfig(BaseModel):
    """Settings for one experiment run.

    ``beta`` fixes the true coefficient vector; otherwise each entry of
    ``beta_norms`` gives beta = norm * e_1. ``future_csv`` names a future
    design (columns x1..xd, one row per future sample) for predictive-cdf and
    astar-surface.
    """

    model_config = ConfigDict(extra="forbid", populate_by_name=True, frozen=True)

    experiment: ExperimentTag
    dims: List[int] = Field(default_factory=lambda: [5])
    p: int = Field(10, ge=1)
    p_tilde: int = Field(10, ge=1)
    beta: Optional[List[float]] = None
    beta_norms: List[float] = Field(default_factory=lambda: [0.0, 0.5, 1.0, 1.5, 2.0])
    design_distribution: DesignDistribution = "std_normal_entries"
    noise_variance: float = Field(1.0, gt=0)
    future_noise_variance: float = Field(1.0, gt=0)
    priors: List[PriorSpec] = Field(
        default_factory=lambda: [PriorSpec(type="uniform"), PriorSpec(type="rescaled_stein")]
    )
    lambdas: List[float] = Field(default_factory=list)
    outer_reps: Optional[int] = Field(None, ge=2)
    mc_n: Optional[int] = Field(None, ge=2)
    replications: int = Field(1, ge=1)
    seed: int = Field(0, ge=0, lt=2**64)
    output: str = "results"
    intercept: bool = False
    intercept_value: float = 1.0
    x_grid: List[float] = Field(default_factory=lambda: [0.0, 0.5, 1.0, 1.5, 2.0])
    x2_grid: List[float] = Field(default_factory=lambda: [0.0, 0.5, 1.0, 1.5, 2.0])
    cdf_levels: List[float] = Field(default_factory=lambda: [0.05 * k for k in range(1, 20)])
    training_csv: Optional[str] = None
    future_x: Optional[List[float]] = None
    future_csv: Optional[str] = None

    @field_validator("dims", "beta_norms", "x_grid", "x2_grid", "cdf_levels")
    @classmethod
    def _nonempty(cls, value: list) -> list:
        if not value:
            raise ValueError("grids must be nonempty")
        return value

    @field_validator("dims")
    @classmethod
    def _positive_dims(cls, value: List[int]) -> List[int]:
        if any(d < 1 for d in value):
            raise ValueError("dimensions must be positive")
        return value

    @field_validator("lambdas")
    @classmethod
    def _positive_lambdas(cls, value: List[float]) -> List[float]:
        if any(lam <= 0 for lam in value):
            raise ValueError("ridge penalties must be positive")
        return value

    @model_validator(mode="after")
    def _check_consistency(self):
        effective = [d + (1 if self.intercept else 0) for d in self.dims]
        if any(spec.type in STEIN_TYPES for spec in self.priors) and min(effective) < 3:
            raise ValueError("Stein priors need d >= 3")
        if self.future_x is not None and self.future_csv is not None:
            raise ValueError("give either future_x or future_csv, not both")
        if self.beta is not None and len(self.dims) != 1:
            raise ValueError("an explicit beta fixes a single dimension")
        if self.beta is not None and len(self.beta) != self.dims[0]:
            raise ValueError(f"beta has {len(self.beta)} entries, expected d = {self.dims[0]}")
        if self.experiment in ("fit-lines", "predictive-cdf", "risk-curve", "compare-densities"):
            if self.p < max(effective):
                raise ValueError("training designs need p >= d")
        return self

    @property
    def densities(self) -> List[PriorSpec]:
        """Configured priors followed by one ridge prior per entry of ``lambdas``."""
        extra = [PriorSpec(type="ridge", lam=lam) for lam in self.lambdas]
        return list(self.priors) + [spec for spec in extra if spec.name not in {p.name for p in self.priors}]

    def with_overrides(self, **overrides) -> "ExperimentConfig":
        """Copy with CLI overrides applied; ``None`` values are ignored."""
        updates = {k: v for k, v in overrides.items() if v is not None}
        return ExperimentConfig.model_validate({**self.model_dump(by_alias=True), **updates})


def load_experiment_config(path: Union[str, Path]) -> ExperimentConfig:
    """Read and validate an experiment config.

    Raises:
        ConfigError: The file is not valid JSON or fails validation
    """
    with open(path, "r") as file:
        try:
            raw = json.load(file)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path} is not valid JSON: {e}") from e
    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(f"Invalid experiment config {path}:\n{e}") from e
