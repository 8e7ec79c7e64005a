"""
Marginal densities m_pi(z; C) = int N(z; mu, C) pi(mu) dmu

Closed forms for the uniform and ridge priors, the batched quadrature for the
Stein family, fixed common random numbers for general radial priors, a brute
force Monte Carlo oracle, and the posterior mean through
E[mu | y] = y + Sigma grad log m(y; Sigma).
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np
from scipy.special import logsumexp

from src.gaussian_core import SpdMatrix, as_vectors, gaussian_logpdf, symmetrize
from src.priors import GaussianRidgePrior, Prior, RadialPrior, RescaledSteinPrior, SteinPrior, UniformPrior
from src.utils.errors import DimensionMismatchError, InvalidInputError, MarginalNotFiniteError
from src.utils.settings import NumericalSettings, get_settings
from .stein_quadrature import stein_log_marginal_whitened

logger = logging.getLogger(__name__)


class MarginalMethod(str, Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE_1D = "quadrature_1d"
    MONTE_CARLO = "monte_carlo"


class MarginalEvaluator:
    """Evaluates log m_pi(z; C) for one (prior, covariance) pair.

    The additive constant of log m follows the prior's own constant; every
    public risk quantity is a difference in which it cancels.
    """

    def __init__(self, prior: Prior, cov: SpdMatrix, settings: Optional[NumericalSettings] = None):
        """Initialize the evaluator.

        Args:
            prior: Prior density
            cov: Covariance C of the Normal kernel
            settings: Numerical settings
        """
        if prior.dim != cov.dim:
            raise DimensionMismatchError(f"Prior dimension {prior.dim} != covariance dimension {cov.dim}")
        self.prior = prior
        self.cov = cov
        self.settings = settings or get_settings()
        self.dim = cov.dim

        if isinstance(prior, UniformPrior):
            self.method = MarginalMethod.CLOSED_FORM
        elif isinstance(prior, GaussianRidgePrior):
            self.method = MarginalMethod.CLOSED_FORM
            self._convolved = SpdMatrix.from_array(symmetrize(cov.entries + np.eye(self.dim) / prior.lam))
        elif isinstance(prior, (SteinPrior, RescaledSteinPrior)):
            self.method = MarginalMethod.QUADRATURE_1D
            self._whitening = prior.sigma_star.inv_sqrt if isinstance(prior, RescaledSteinPrior) else np.eye(self.dim)
            whitened_cov = symmetrize(self._whitening @ cov.entries @ self._whitening)
            c, q = np.linalg.eigh(whitened_cov)
            self._eigenvalues = c
            self._rotation = self._whitening @ q
        elif isinstance(prior, RadialPrior):
            self.method = MarginalMethod.MONTE_CARLO
            rng = np.random.default_rng(self.settings.radial_mc_seed)
            self._offsets = rng.standard_normal((self.settings.radial_mc_draws, self.dim)) @ cov.sqrt
        else:
            raise TypeError(f"No marginal available for prior {type(prior).__name__}")
        logger.debug(f"Marginal evaluator for {prior.kind} (d={self.dim}) uses {self.method.value}")

    def whitened(self, z) -> Tuple[np.ndarray, np.ndarray]:
        """Arguments and eigenvalues for the batched Stein kernel: log m(z; C) = kernel(z_tilde, c)."""
        if self.method is not MarginalMethod.QUADRATURE_1D:
            raise TypeError(f"The {self.prior.kind} prior has no whitened Stein representation")
        return np.atleast_2d(as_vectors(z, self.dim, "z")) @ self._rotation, self._eigenvalues

    def _check_finite(self, values: np.ndarray) -> np.ndarray:
        if not np.all(np.isfinite(values)):
            raise MarginalNotFiniteError(f"log marginal of the {self.prior.kind} prior is not finite")
        return values

    def _radial(self, z: np.ndarray) -> np.ndarray:
        rows = max(1, 2_000_000 // (self._offsets.shape[0] * self.dim))
        out = []
        for start in range(0, z.shape[0], rows):
            points = z[start:start + rows, None, :] + self._offsets[None, :, :]
            log_pi = self.prior.log_density(points.reshape(-1, self.dim)).reshape(points.shape[:2])
            out.append(logsumexp(log_pi, axis=1) - np.log(self._offsets.shape[0]))
        return np.concatenate(out)

    def log_marginal(self, z) -> Union[float, np.ndarray]:
        """log m_pi(z; C) for a vector or an (n, d) batch."""
        z = as_vectors(z, self.dim, "z")
        batch = np.atleast_2d(z)
        if isinstance(self.prior, UniformPrior):
            values = np.zeros(batch.shape[0])
        elif isinstance(self.prior, GaussianRidgePrior):
            values = np.atleast_1d(gaussian_logpdf(batch, np.zeros(self.dim), self._convolved))
        elif self.method is MarginalMethod.QUADRATURE_1D:
            values, _ = stein_log_marginal_whitened(batch @ self._rotation, self._eigenvalues, settings=self.settings)
        else:
            values = self._radial(batch)
        values = self._check_finite(values)
        return float(values[0]) if z.ndim == 1 else values

    def grad_log_marginal(self, z) -> np.ndarray:
        """Gradient of log m_pi(z; C) with respect to z."""
        z = as_vectors(z, self.dim, "z")
        batch = np.atleast_2d(z)
        if isinstance(self.prior, UniformPrior):
            grad = np.zeros_like(batch)
        elif isinstance(self.prior, GaussianRidgePrior):
            grad = -batch @ self._convolved.inverse
        elif self.method is MarginalMethod.QUADRATURE_1D:
            _, grad_tilde = stein_log_marginal_whitened(batch @ self._rotation, self._eigenvalues,
                                                        with_grad=True, settings=self.settings)
            grad = grad_tilde @ self._rotation.T
        else:
            grad = self.finite_difference_grad(batch)
        grad = self._check_finite(grad)
        return grad[0] if z.ndim == 1 else grad

    def finite_difference_grad(self, z, h: Optional[float] = None) -> np.ndarray:
        """Central finite-difference gradient of log m, used for radial priors and validation."""
        h = h or self.settings.fd_step
        batch = np.atleast_2d(as_vectors(z, self.dim, "z"))
        grad = np.empty_like(batch)
        for i in range(self.dim):
            step = np.zeros(self.dim)
            step[i] = h
            grad[:, i] = (np.atleast_1d(self.log_marginal(batch + step))
                          - np.atleast_1d(self.log_marginal(batch - step))) / (2.0 * h)
        return grad[0] if np.ndim(z) == 1 else grad


def log_marginal(ev: MarginalEvaluator, z) -> Union[float, np.ndarray]:
    return ev.log_marginal(z)


def grad_log_marginal(ev: MarginalEvaluator, z) -> np.ndarray:
    return ev.grad_log_marginal(z)


@dataclass(frozen=True)
class MonteCarloMarginal:
    """Importance-sampling estimate of m_pi(z; C)."""

    estimate: float
    std_error: float
    n: int
    rejected: int = 0


def log_marginal_mc_oracle(prior: Prior, cov: SpdMatrix, z, n: int, rng: np.random.Generator,
                           settings: Optional[NumericalSettings] = None) -> MonteCarloMarginal:
    """Brute-force m_pi(z; C) = E[pi(mu)], mu ~ N(z, C).

    Draws within ``pole_radius`` of a Stein pole are redrawn and counted.

    Args:
        prior: Prior density (its own normalising constant included)
        cov: Covariance C
        z: Argument of the marginal
        n: Number of draws, at least 1000
        rng: Caller-owned random generator
        settings: Numerical settings

    Returns:
        MonteCarloMarginal with estimate, standard error and rejection count
    """
    settings = settings or get_settings()
    if n < 1000:
        raise InvalidInputError(f"Oracle needs at least 1000 draws, got {n}")
    z = as_vectors(z, cov.dim, "z")
    if isinstance(prior, UniformPrior):
        return MonteCarloMarginal(estimate=1.0, std_error=0.0, n=n)

    draws = z + rng.standard_normal((n, cov.dim)) @ cov.sqrt
    rejected = 0
    if isinstance(prior, (SteinPrior, RescaledSteinPrior)):
        whiten = prior.whiten if isinstance(prior, RescaledSteinPrior) else (lambda x: x)
        near = np.linalg.norm(whiten(draws), axis=1) < settings.pole_radius
        while np.any(near):
            rejected += int(np.sum(near))
            draws[near] = z + rng.standard_normal((int(np.sum(near)), cov.dim)) @ cov.sqrt
            near = np.linalg.norm(whiten(draws), axis=1) < settings.pole_radius
        if rejected:
            logger.info(f"Oracle redrew {rejected} draws near the Stein pole")
    values = np.exp(prior.log_density(draws))
    return MonteCarloMarginal(
        estimate=float(np.mean(values)),
        std_error=float(np.std(values, ddof=1) / np.sqrt(n)),
        n=n,
        rejected=rejected,
    )


def posterior_mean(prior: Prior, y, sigma: SpdMatrix,
                   settings: Optional[NumericalSettings] = None) -> np.ndarray:
    """E_pi[mu | y] = y + Sigma grad log m_pi(y; Sigma)."""
    y = as_vectors(y, sigma.dim, "y")
    if isinstance(prior, UniformPrior):
        return y.copy()
    grad = MarginalEvaluator(prior, sigma, settings).grad_log_marginal(y)
    return y + grad @ sigma.entries
