"""
Covariance ensembles for partial Bayes risk

WishartIdentity draws W_d(df, I / df); DesignInduced draws a design X and
returns sigma^2 (X X^T)^{-1} in the training role or sigma_tilde^2 (X X^T)^+
in the future role.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np
from scipy.stats import wishart

from src.gaussian_core import Covariance, PsdMatrix, SpdMatrix, symmetrize
from src.regression import DesignDistribution, draw_design
from src.utils.errors import InvalidInputError, RankDeficiencyError

logger = logging.getLogger(__name__)


class CovarianceEnsemble(ABC):
    """Distribution over covariance matrices of a fixed dimension."""

    dim: int
    tag: str

    @abstractmethod
    def sample(self, rng: np.random.Generator) -> Covariance:
        """Draw one covariance."""

    @property
    def is_rotation_invariant(self) -> bool:
        return True


@dataclass(frozen=True)
class WishartIdentity(CovarianceEnsemble):
    dim: int
    df: Optional[int] = None
    tag: str = "wishart_identity"

    def __post_init__(self):
        if self.df is not None and self.df < self.dim:
            raise InvalidInputError(f"Wishart degrees of freedom {self.df} below dimension {self.dim}")

    @property
    def degrees_of_freedom(self) -> int:
        return self.df if self.df is not None else self.dim + 2

    def sample(self, rng: np.random.Generator) -> SpdMatrix:
        df = self.degrees_of_freedom
        draw = wishart(df=df, scale=np.eye(self.dim) / df).rvs(random_state=rng)
        return SpdMatrix.from_array(symmetrize(np.atleast_2d(draw)))


@dataclass(frozen=True)
class DesignInduced(CovarianceEnsemble):
    dim: int
    n_samples: int
    noise_variance: float = 1.0
    role: Literal["train", "future"] = "train"
    distribution: DesignDistribution = "std_normal_entries"
    tag: str = "design_induced"

    def __post_init__(self):
        if self.role == "train" and self.n_samples < self.dim:
            raise RankDeficiencyError(f"Training designs need p >= d, got p = {self.n_samples}, d = {self.dim}")
        if not self.is_rotation_invariant:
            logger.warning(f"Design distribution {self.distribution} is not rotation invariant")

    @property
    def is_rotation_invariant(self) -> bool:
        return self.distribution == "std_normal_entries"

    def sample(self, rng: np.random.Generator) -> Covariance:
        design = draw_design(rng, self.dim, self.n_samples, self.distribution)
        gram = symmetrize(design @ design.T)
        if self.role == "train":
            return SpdMatrix.from_array(symmetrize(self.noise_variance * np.linalg.inv(gram)))
        return PsdMatrix.from_array(symmetrize(self.noise_variance * PsdMatrix.from_array(gram).pseudo_inverse))
