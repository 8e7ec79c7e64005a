"""
A* construction and numeric superharmonicity checks

A* = Sigma_1^{1/2} U^T (Lambda^{-1} - I)^{1/2}, where
Sigma_1^{1/2} Sigma_2^{-1} Sigma_1^{1/2} = U^T Lambda U, satisfies
A* A*^T = Sigma_2 - Sigma_1. A prior pi with pi(A* .) superharmonic gives a
predictive density dominating the uniform-prior one.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.gaussian_core import SpdMatrix, symmetrize
from src.utils.errors import (
    DimensionMismatchError,
    InvalidInputError,
    NotLoewnerOrderedError,
    RankDeficiencyError,
)
from src.utils.settings import NumericalSettings, get_settings
from .priors import Prior, RescaledSteinPrior, SteinPrior

logger = logging.getLogger(__name__)

MIN_SUPERHARMONIC_RANK = 3


@dataclass(frozen=True, eq=False)
class AstarMatrix:
    """A* together with the pair it was built from."""

    matrix: np.ndarray
    sigma_1: SpdMatrix
    sigma_2: SpdMatrix
    rank: int

    @property
    def rank_warning(self) -> bool:
        """Set when rank(Sigma_2 - Sigma_1) < 3: no superharmonic pi(A* .) exists."""
        return self.rank < MIN_SUPERHARMONIC_RANK

    @property
    def difference(self) -> np.ndarray:
        return self.sigma_2.entries - self.sigma_1.entries


def build_astar(sigma_1: SpdMatrix, sigma_2: SpdMatrix,
                settings: Optional[NumericalSettings] = None) -> AstarMatrix:
    """Build A* for Sigma_1 <= Sigma_2.

    Args:
        sigma_1: The smaller covariance (Sigma_w in the regression setting)
        sigma_2: The larger covariance (Sigma in the regression setting)
        settings: Numerical settings

    Returns:
        AstarMatrix whose columns for unit eigenvalues of Lambda are zero
    """
    settings = settings or get_settings()
    if sigma_1.dim != sigma_2.dim:
        raise DimensionMismatchError(f"Covariance dimensions differ: {sigma_1.dim} vs {sigma_2.dim}")
    scale = max(sigma_1.eigenvalues[0], sigma_2.eigenvalues[0])
    gap = np.linalg.eigvalsh(symmetrize(sigma_2.entries - sigma_1.entries))
    if gap[0] < -settings.loewner_tol * scale:
        raise NotLoewnerOrderedError(f"Sigma_2 - Sigma_1 has eigenvalue {gap[0]:.3e}")

    whitened = symmetrize(sigma_1.sqrt @ sigma_2.inverse @ sigma_1.sqrt)
    lam, vectors = np.linalg.eigh(whitened)
    unit = np.abs(lam - 1.0) < settings.astar_unit_tol
    stretch = np.where(unit, 0.0, np.sqrt(np.clip(1.0 / lam - 1.0, 0.0, None)))
    matrix = sigma_1.sqrt @ vectors * stretch
    rank = int(np.sum(~unit))
    if rank < MIN_SUPERHARMONIC_RANK:
        logger.warning(f"rank(Sigma_2 - Sigma_1) = {rank} < 3; no superharmonic pi(A* .) exists")
    return AstarMatrix(matrix=matrix, sigma_1=sigma_1, sigma_2=sigma_2, rank=rank)


def rescaled_stein_identity_check(sigma_1: SpdMatrix, sigma_2: SpdMatrix, mu,
                                  settings: Optional[NumericalSettings] = None) -> Tuple[float, float]:
    """Evaluate both sides of pi_{S; Sigma_2 - Sigma_1}(A* mu) = pi_S(mu).

    Returns:
        (log pi_{S; Sigma_2 - Sigma_1}(A* mu), log pi_S(mu))
    """
    astar = build_astar(sigma_1, sigma_2, settings)
    if astar.rank < sigma_1.dim:
        raise RankDeficiencyError(f"Sigma_2 - Sigma_1 has rank {astar.rank} < {sigma_1.dim}")
    rescaled = RescaledSteinPrior(SpdMatrix.from_array(symmetrize(astar.difference), settings))
    mu = np.asarray(mu, dtype=float)
    return rescaled.log_density(astar.matrix @ mu), SteinPrior(sigma_1.dim).log_density(mu)


@dataclass(frozen=True)
class SuperharmonicityReport:
    """Discrete Laplacians of pi at a set of points."""

    laplacians: np.ndarray
    step: float

    @property
    def max_value(self) -> float:
        return float(np.max(self.laplacians))

    @property
    def is_superharmonic(self) -> bool:
        return self.max_value <= 0.0


def superharmonicity_check(prior: Prior, points: Sequence[Sequence[float]], h: float) -> SuperharmonicityReport:
    """Central-difference Laplacian of pi (not log pi) at each point.

    Args:
        prior: Prior to probe
        points: Evaluation points, each at least 10h away from the prior's pole
        h: Finite-difference step

    Returns:
        SuperharmonicityReport with one Laplacian per point
    """
    if h <= 0:
        raise InvalidInputError(f"Step must be positive, got {h}")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != prior.dim:
        raise DimensionMismatchError(f"Points have dimension {pts.shape[1]}, prior has {prior.dim}")
    if isinstance(prior, (SteinPrior, RescaledSteinPrior)):
        if np.any(np.linalg.norm(pts - prior.mode, axis=1) < 10.0 * h):
            raise InvalidInputError("Points must stay at least 10h away from the Stein pole")

    values: List[float] = []
    eye = np.eye(prior.dim) * h
    for point in pts:
        centre = prior.density(point)
        plus = prior.density(point + eye)
        minus = prior.density(point - eye)
        values.append(float(np.sum(plus + minus - 2.0 * centre) / h**2))
    return SuperharmonicityReport(laplacians=np.array(values), step=h)
