"""
Normal linear regression reduced to the Normal mean problem

y = X^T beta + eps with eps ~ N(0, sigma^2 I_p) reduces to
y_1 = (X X^T)^{-1} X y ~ N(beta, Sigma), Sigma = sigma^2 (X X^T)^{-1}; a future
design X_tilde reduces to y_tilde_1 = (X_tilde X_tilde^T)^+ X_tilde y_tilde with
covariance sigma_tilde^2 (X_tilde X_tilde^T)^+. The residual factor is the same
for every prior and is left out of predictive densities.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
import pandas as pd

from src.gaussian_core import PsdMatrix, SpdMatrix, combine_covariance, symmetrize
from src.marginals import posterior_mean
from src.predictive import PredictiveDensity, PredictiveDraws
from src.priors import AstarMatrix, Prior, RescaledSteinPrior, build_astar
from src.utils.errors import ConfigError, DimensionMismatchError, InvalidInputError, RankDeficiencyError
from src.utils.settings import NumericalSettings, get_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RegressionData:
    """Training design X (d x p, samples as columns), targets y and known noise variance."""

    design: np.ndarray
    targets: np.ndarray
    noise_variance: float = 1.0

    def __post_init__(self):
        design = np.atleast_2d(np.asarray(self.design, dtype=float))
        targets = np.asarray(self.targets, dtype=float).ravel()
        if design.shape[1] != targets.size:
            raise DimensionMismatchError(f"Design has {design.shape[1]} samples but {targets.size} targets")
        if design.shape[1] < design.shape[0]:
            raise RankDeficiencyError(f"Need p >= d, got p = {design.shape[1]}, d = {design.shape[0]}")
        if not self.noise_variance > 0:
            raise InvalidInputError(f"Noise variance must be positive, got {self.noise_variance}")
        object.__setattr__(self, "design", design)
        object.__setattr__(self, "targets", targets)

    @property
    def dim(self) -> int:
        return self.design.shape[0]

    @property
    def n_samples(self) -> int:
        return self.design.shape[1]

    @property
    def condition_number(self) -> float:
        return float(np.linalg.cond(self.design @ self.design.T))


@dataclass(frozen=True, eq=False)
class FutureDesign:
    """Future design X_tilde (d x p_tilde) with its noise variance."""

    design: np.ndarray
    noise_variance: float = 1.0

    def __post_init__(self):
        design = np.asarray(self.design, dtype=float)
        if design.ndim == 1:
            design = design[:, None]
        if not np.all(np.isfinite(design)):
            raise InvalidInputError("Future design has non-finite entries")
        if not self.noise_variance > 0:
            raise InvalidInputError(f"Noise variance must be positive, got {self.noise_variance}")
        object.__setattr__(self, "design", design)

    @property
    def dim(self) -> int:
        return self.design.shape[0]


@dataclass(frozen=True, eq=False)
class ReducedProblem:
    """The Normal mean problem a regression reduces to."""

    y1: np.ndarray
    sigma: SpdMatrix
    sigma_tilde: PsdMatrix
    future_map: np.ndarray
    condition_number: float


def reduce(data: RegressionData, settings: Optional[NumericalSettings] = None) -> Tuple[np.ndarray, SpdMatrix]:
    """Sufficient statistic y_1 = (X X^T)^{-1} X y and its covariance sigma^2 (X X^T)^{-1}."""
    settings = settings or get_settings()
    # samples in canonical order: the result is bit-identical under any reordering
    order = np.lexsort(np.vstack([data.targets, data.design]))
    design, targets = data.design[:, order], data.targets[order]
    gram = symmetrize(design @ design.T)
    condition = float(np.linalg.cond(gram))
    if not condition < settings.condition_cap:
        raise RankDeficiencyError(f"X X^T has condition number {condition:.3e} above {settings.condition_cap:.0e}")
    y1 = np.linalg.solve(gram, design @ targets)
    sigma = SpdMatrix.from_array(symmetrize(data.noise_variance * np.linalg.inv(gram)), settings)
    return y1, sigma


def reduce_future(fd: FutureDesign, settings: Optional[NumericalSettings] = None) -> Tuple[np.ndarray, PsdMatrix]:
    """Future statistic map (X_tilde X_tilde^T)^+ X_tilde and Sigma_tilde = sigma_tilde^2 (X_tilde X_tilde^T)^+."""
    if not np.any(fd.design):
        raise RankDeficiencyError("Future design is zero; there is no future information to reduce")
    gram = PsdMatrix.from_array(symmetrize(fd.design @ fd.design.T), settings)
    future_map = gram.pseudo_inverse @ fd.design
    sigma_tilde = PsdMatrix.from_array(symmetrize(fd.noise_variance * gram.pseudo_inverse), settings)
    return future_map, sigma_tilde


def reduce_problem(data: RegressionData, fd: FutureDesign,
                   settings: Optional[NumericalSettings] = None) -> ReducedProblem:
    if data.dim != fd.dim:
        raise DimensionMismatchError(f"Training design has d = {data.dim}, future design d = {fd.dim}")
    y1, sigma = reduce(data, settings)
    future_map, sigma_tilde = reduce_future(fd, settings)
    return ReducedProblem(y1=y1, sigma=sigma, sigma_tilde=sigma_tilde, future_map=future_map,
                          condition_number=data.condition_number)


def ridge_estimator(data: RegressionData, lam: float) -> np.ndarray:
    """(X X^T + lambda I)^{-1} X y."""
    if not lam > 0:
        raise InvalidInputError(f"Ridge penalty must be positive, got {lam}")
    gram = data.design @ data.design.T + lam * np.eye(data.dim)
    return np.linalg.solve(gram, data.design @ data.targets)


class RegressionPredictive:
    """Predictive density of future targets y_tilde = X_tilde^T beta + noise through the reduced model."""

    def __init__(self, data: RegressionData, fd: FutureDesign, prior: Prior,
                 settings: Optional[NumericalSettings] = None):
        self.data = data
        self.future = fd
        self.prior = prior
        self.settings = settings or get_settings()
        self.reduced = reduce_problem(data, fd, self.settings)
        self.density = PredictiveDensity(prior, self.reduced.y1, self.reduced.sigma,
                                         self.reduced.sigma_tilde, self.settings)
        self.metadata: Dict[str, Any] = {
            "residual_factor_omitted": True,
            "noise_variance": data.noise_variance,
            "future_noise_variance": fd.noise_variance,
            "condition_number": self.reduced.condition_number,
        }

    def statistic(self, y_tilde) -> np.ndarray:
        """y_tilde_1 = (X_tilde X_tilde^T)^+ X_tilde y_tilde."""
        return np.asarray(y_tilde, dtype=float) @ self.reduced.future_map.T

    def projection_residual(self, y_tilde) -> Union[float, np.ndarray]:
        """Norm of the part of y_tilde outside the row space of X_tilde."""
        y_tilde = np.asarray(y_tilde, dtype=float)
        fitted = self.statistic(y_tilde) @ self.future.design
        return np.linalg.norm(y_tilde - fitted, axis=-1)

    def logpdf(self, y_tilde) -> Union[float, np.ndarray]:
        """Reduced-model predictive log-density of the statistic of y_tilde."""
        return self.density.support_logpdf(self.statistic(y_tilde))

    @property
    def posterior_mean(self) -> np.ndarray:
        return posterior_mean(self.prior, self.reduced.y1, self.reduced.sigma, self.settings)

    def mean(self, x_tilde=None) -> np.ndarray:
        """E[y_tilde | y] = x_tilde^T E[beta | y], at the future design by default."""
        x = self.future.design if x_tilde is None else np.asarray(x_tilde, dtype=float)
        return x.T @ self.posterior_mean

    def sample(self, rng: np.random.Generator, size: int = 1) -> PredictiveDraws:
        """Draws of the future targets, shape (size, p_tilde)."""
        draws = self.density.sample(rng, size)
        targets = draws.samples @ self.future.design
        projector = self.future.design.T @ self.reduced.future_map
        residual_cov = self.future.noise_variance * symmetrize(np.eye(projector.shape[0]) - projector)
        if np.max(np.abs(residual_cov)) > 1e-12 * self.future.noise_variance:
            eigenvalues, vectors = np.linalg.eigh(residual_cov)
            factor = vectors * np.sqrt(np.clip(eigenvalues, 0.0, None))
            targets = targets + rng.standard_normal(targets.shape) @ factor.T
        return PredictiveDraws(samples=targets, acceptance_rate=draws.acceptance_rate, proposals=draws.proposals)


def regression_predictive(data: RegressionData, fd: FutureDesign, prior: Prior,
                          settings: Optional[NumericalSettings] = None) -> RegressionPredictive:
    return RegressionPredictive(data, fd, prior, settings)


def regression_predictive_logpdf(data: RegressionData, fd: FutureDesign, prior: Prior, y_tilde,
                                 settings: Optional[NumericalSettings] = None) -> Union[float, np.ndarray]:
    return RegressionPredictive(data, fd, prior, settings).logpdf(y_tilde)


@dataclass(frozen=True, eq=False)
class AstarRegressionPrior:
    """pi_{S; Sigma - Sigma_w}, for which pi(A* beta) is the Stein prior in beta."""

    prior: RescaledSteinPrior
    astar: AstarMatrix


def astar_regression_prior(data: RegressionData, fd: FutureDesign,
                           settings: Optional[NumericalSettings] = None) -> AstarRegressionPrior:
    """Rescaled Stein prior built from the future design.

    Raises:
        RankDeficiencyError: rank(Sigma - Sigma_w) < d. This is stricter than
            rank >= 3, since the rescaled Stein prior needs a definite Sigma*
    """
    settings = settings or get_settings()
    reduced = reduce_problem(data, fd, settings)
    sigma_w = combine_covariance(reduced.sigma, reduced.sigma_tilde)
    astar = build_astar(sigma_w, reduced.sigma, settings)
    if astar.rank < data.dim:
        raise RankDeficiencyError(
            f"A* regression prior needs rank(Sigma - Sigma_w) = d = {data.dim}, got rank {astar.rank}; "
            "rank >= 3 is not enough. Add future samples spanning all directions"
        )
    prior = RescaledSteinPrior(SpdMatrix.from_array(symmetrize(astar.difference), settings))
    return AstarRegressionPrior(prior=prior, astar=astar)


def load_regression_csv(path: Union[str, Path], noise_variance: float = 1.0) -> RegressionData:
    """Read a CSV with columns x1..xd and y, one row per sample."""
    frame = pd.read_csv(path)
    if "y" not in frame.columns:
        raise ConfigError(f"{path} has no 'y' column")
    x_columns = [c for c in frame.columns if c != "y"]
    return RegressionData(design=frame[x_columns].to_numpy(dtype=float).T,
                          targets=frame["y"].to_numpy(dtype=float), noise_variance=noise_variance)


def load_future_csv(path: Union[str, Path], noise_variance: float = 1.0) -> FutureDesign:
    """Read a CSV with columns x1..xd, one row per future sample."""
    frame = pd.read_csv(path)
    return FutureDesign(design=frame.to_numpy(dtype=float).T, noise_variance=noise_variance)


# Three training samples in R^3 whose least-squares fit is beta = (1, 1, 0).
THREE_POINT_DESIGN = np.array([
    [np.sqrt(3.0) / 2.0, np.sqrt(3.0) / 2.0, 0.0],
    [0.5, -0.5, 0.0],
    [0.0, 0.0, 1.0],
])
THREE_POINT_TARGETS = np.array([np.sqrt(3.0) / 2.0 + 0.5, np.sqrt(3.0) / 2.0 - 0.5, 0.0])


def three_point_data(noise_variance: float = 1.0) -> RegressionData:
    return RegressionData(design=THREE_POINT_DESIGN, targets=THREE_POINT_TARGETS, noise_variance=noise_variance)
