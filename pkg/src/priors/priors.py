"""
Prior family for shrinkage prediction

Uniform, Stein, rescaled Stein, Gaussian ridge and general radial priors, each
evaluable as a log-density up to a prior-specific additive constant. The
constant cancels in every predictive density and risk difference.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from src.gaussian_core import SpdMatrix, as_vectors
from src.gaussian_core.gaussian_core import LOG_2PI
from src.utils.errors import DimensionMismatchError, InvalidInputError, PriorPoleError

logger = logging.getLogger(__name__)


class Prior(ABC):
    """A (possibly improper) prior density on R^d."""

    kind: str = "prior"
    dim: int

    @abstractmethod
    def log_density(self, mu) -> Union[float, np.ndarray]:
        """log pi(mu) up to an additive constant; mu is (d,) or (n, d)."""

    @property
    def mode(self) -> np.ndarray:
        """Point maximising the marginal m(.; C) for every C."""
        return np.zeros(self.dim)

    @property
    def is_rotation_invariant(self) -> bool:
        return False

    @property
    def supports_rejection_sampling(self) -> bool:
        """True when m(.; C) attains its maximum at ``mode``."""
        return True

    def density(self, mu) -> Union[float, np.ndarray]:
        return np.exp(self.log_density(mu))

    def _vectors(self, mu) -> np.ndarray:
        return as_vectors(mu, self.dim, "mu")


def _scalar_or_array(values: np.ndarray, mu: np.ndarray):
    return float(values) if mu.ndim == 1 else values


@dataclass(frozen=True, eq=False)
class UniformPrior(Prior):
    """pi_I(mu) = 1."""

    dim: int
    kind: str = field(default="uniform", init=False)

    def log_density(self, mu):
        mu = self._vectors(mu)
        return _scalar_or_array(np.zeros(mu.shape[:-1]), mu)

    @property
    def is_rotation_invariant(self) -> bool:
        return True


def _stein_log_density(whitened: np.ndarray, dim: int, original: np.ndarray):
    norms = np.linalg.norm(whitened, axis=-1)
    if np.any(norms == 0.0):
        raise PriorPoleError("Stein prior evaluated at its pole mu = 0")
    return _scalar_or_array(-(dim - 2) * np.log(norms), original)


@dataclass(frozen=True, eq=False)
class SteinPrior(Prior):
    """pi_S(mu) = ||mu||^{-(d-2)}, harmonic away from 0 for d >= 3."""

    dim: int
    kind: str = field(default="stein", init=False)

    def __post_init__(self):
        if self.dim < 3:
            raise DimensionMismatchError(f"Stein priors need d >= 3, got d = {self.dim}")

    def log_density(self, mu):
        mu = self._vectors(mu)
        return _stein_log_density(mu, self.dim, mu)

    @property
    def is_rotation_invariant(self) -> bool:
        return True


@dataclass(frozen=True, eq=False)
class RescaledSteinPrior(Prior):
    """pi_S(Sigma*^{-1/2} mu): the Stein prior in Sigma*-whitened coordinates."""

    sigma_star: SpdMatrix
    kind: str = field(default="rescaled_stein", init=False)

    def __post_init__(self):
        if self.sigma_star.dim < 3:
            raise DimensionMismatchError(f"Stein priors need d >= 3, got d = {self.sigma_star.dim}")

    @property
    def dim(self) -> int:
        return self.sigma_star.dim

    def whiten(self, x) -> np.ndarray:
        """Sigma*^{-1/2} x for a vector or a batch."""
        return np.asarray(x, dtype=float) @ self.sigma_star.inv_sqrt

    def log_density(self, mu):
        mu = self._vectors(mu)
        return _stein_log_density(self.whiten(mu), self.dim, mu)


@dataclass(frozen=True, eq=False)
class GaussianRidgePrior(Prior):
    """pi_RR(mu; lambda) = N(mu; 0, lambda^{-1} I), normalised."""

    dim: int
    lam: float
    kind: str = field(default="ridge", init=False)

    def __post_init__(self):
        if not self.lam > 0:
            raise InvalidInputError(f"Ridge precision must be positive, got {self.lam}")

    def log_density(self, mu):
        mu = self._vectors(mu)
        values = 0.5 * self.dim * (np.log(self.lam) - LOG_2PI) - 0.5 * self.lam * np.sum(mu * mu, axis=-1)
        return _scalar_or_array(values, mu)

    @property
    def is_rotation_invariant(self) -> bool:
        return True


@dataclass(frozen=True, eq=False)
class RadialPrior(Prior):
    """pi(mu) = g(||mu - center||) for a user-supplied profile g(r) >= 0.

    ``g`` must accept an array of radii. Declaring ``nonincreasing=True``
    enables rejection sampling of the predictive density.
    """

    dim: int
    g: Callable[[np.ndarray], np.ndarray]
    center: Optional[np.ndarray] = None
    nonincreasing: bool = False
    kind: str = field(default="radial", init=False)

    def log_density(self, mu):
        mu = self._vectors(mu)
        radii = np.linalg.norm(mu - self.mode, axis=-1)
        with np.errstate(divide="ignore"):
            values = np.log(np.asarray(self.g(radii), dtype=float))
        return _scalar_or_array(values, mu)

    @property
    def mode(self) -> np.ndarray:
        return np.zeros(self.dim) if self.center is None else np.asarray(self.center, dtype=float)

    @property
    def is_rotation_invariant(self) -> bool:
        return self.center is None or not np.any(self.center)

    @property
    def supports_rejection_sampling(self) -> bool:
        return self.nonincreasing


def log_prior(prior: Prior, mu) -> Union[float, np.ndarray]:
    """Evaluate log pi(mu) up to the prior's additive constant."""
    return prior.log_density(mu)
