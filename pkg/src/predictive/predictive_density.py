"""
Bayesian predictive densities

p_pi(y_tilde | y) = p_I(y_tilde | y) m_pi(w; Sigma_w) / m_pi(y; Sigma), with an
exact rejection sampler, the predictive mean through the posterior mean, the
plug-in density at the MLE and a brute-force Monte Carlo oracle for the ratio.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from src.gaussian_core import (
    Covariance,
    SpdMatrix,
    as_vectors,
    combine_covariance,
    combine_mean,
    gaussian_logpdf,
    project_covariance,
    support_logpdf,
    support_of,
    symmetrize,
)
from src.marginals import MarginalEvaluator, posterior_mean
from src.priors import Prior, UniformPrior
from src.utils.errors import DimensionMismatchError, SamplerError
from src.utils.settings import NumericalSettings, get_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Sample mean of a Monte Carlo average with its standard error."""

    mean: float
    std_error: float
    n: int


@dataclass(frozen=True, eq=False)
class PredictiveDraws:
    """Accepted draws of the rejection sampler."""

    samples: np.ndarray
    acceptance_rate: float
    proposals: int


class PredictiveDensity:
    """Predictive density of a future observation y_tilde ~ N(mu, Sigma_tilde) given y ~ N(mu, Sigma).

    When Sigma_tilde is rank deficient only B^T y_tilde carries information
    about mu, B an orthonormal basis of range(Sigma_tilde).
    """

    def __init__(self, prior: Prior, y, sigma: SpdMatrix, sigma_tilde: Covariance,
                 settings: Optional[NumericalSettings] = None):
        """Initialize the predictive density.

        Args:
            prior: Prior on mu
            y: Observed training vector
            sigma: Training covariance
            sigma_tilde: Future covariance, possibly rank deficient
            settings: Numerical settings
        """
        if not (prior.dim == sigma.dim == sigma_tilde.dim):
            raise DimensionMismatchError(
                f"Dimensions differ: prior {prior.dim}, Sigma {sigma.dim}, Sigma_tilde {sigma_tilde.dim}"
            )
        self.prior = prior
        self.y = as_vectors(y, sigma.dim, "y")
        if self.y.ndim != 1:
            raise DimensionMismatchError("PredictiveDensity takes a single training vector")
        self.sigma = sigma
        self.sigma_tilde = sigma_tilde
        self.settings = settings or get_settings()
        self.dim = sigma.dim

        self.sigma_w = combine_covariance(sigma, sigma_tilde)
        self.uniform_cov = SpdMatrix.from_array(symmetrize(sigma.entries + sigma_tilde.entries))
        self.basis = support_of(sigma_tilde)
        self._training = MarginalEvaluator(prior, sigma, self.settings)
        self._combined = MarginalEvaluator(prior, self.sigma_w, self.settings)
        self.log_m_y = self._training.log_marginal(self.y)

    def log_ratio(self, y_tilde) -> Union[float, np.ndarray]:
        """log m_pi(w; Sigma_w) - log m_pi(y; Sigma)."""
        y_tilde = as_vectors(y_tilde, self.dim, "y_tilde")
        if isinstance(self.prior, UniformPrior):
            return 0.0 if y_tilde.ndim == 1 else np.zeros(y_tilde.shape[0])
        w = combine_mean(self.sigma, self.sigma_tilde, self.sigma_w, self.y, y_tilde)
        return self._combined.log_marginal(w) - self.log_m_y

    def logpdf(self, y_tilde) -> Union[float, np.ndarray]:
        return gaussian_logpdf(y_tilde, self.y, self.uniform_cov) + self.log_ratio(y_tilde)

    def support_logpdf(self, y_tilde) -> Union[float, np.ndarray]:
        """Predictive log-density of B^T y_tilde; equals logpdf for a full-rank Sigma_tilde."""
        return support_logpdf(y_tilde, self.y, self.uniform_cov, self.basis) + self.log_ratio(y_tilde)

    @property
    def mean(self) -> np.ndarray:
        return posterior_mean(self.prior, self.y, self.sigma, self.settings)

    def sample(self, rng: np.random.Generator, size: int = 1) -> PredictiveDraws:
        """Exact draws by rejection from the uniform-prior predictive.

        A proposal is accepted with probability m(w; Sigma_w) / m(mode; Sigma_w),
        which is at most one for priors whose marginal peaks at their mode.

        Args:
            rng: Caller-owned random generator
            size: Number of draws to return

        Returns:
            PredictiveDraws with samples of shape (size, d)
        """
        if not self.prior.supports_rejection_sampling:
            raise SamplerError(f"No rejection bound for the {self.prior.kind} prior")
        if isinstance(self.prior, UniformPrior):
            samples = self.y + rng.standard_normal((size, self.dim)) @ self.uniform_cov.sqrt.T
            return PredictiveDraws(samples=samples, acceptance_rate=1.0, proposals=size)

        log_bound = self._combined.log_marginal(self.prior.mode)
        batch = self.settings.rejection_batch
        accepted = []
        n_accepted = 0
        proposals = 0
        while n_accepted < size:
            candidates = self.y + rng.standard_normal((batch, self.dim)) @ self.uniform_cov.sqrt.T
            w = combine_mean(self.sigma, self.sigma_tilde, self.sigma_w, self.y, candidates)
            log_accept = np.minimum(self._combined.log_marginal(w) - log_bound, 0.0)
            keep = np.log(rng.uniform(size=batch)) < log_accept
            accepted.append(candidates[keep])
            n_accepted += int(np.sum(keep))
            proposals += batch
            rate = n_accepted / proposals
            if proposals >= 10 * batch and rate < self.settings.min_acceptance:
                raise SamplerError(f"Acceptance rate {rate:.2e} below {self.settings.min_acceptance:.0e}")

        rate = n_accepted / proposals
        if rate < 0.05:
            logger.warning(f"Low rejection acceptance rate {rate:.3f} for the {self.prior.kind} prior")
        return PredictiveDraws(samples=np.concatenate(accepted)[:size], acceptance_rate=rate, proposals=proposals)

    def normalization_check(self, n: int, rng: np.random.Generator) -> MonteCarloEstimate:
        """E_{p_I}[p_pi / p_I], which is one for a proper predictive density."""
        draws = self.y + rng.standard_normal((n, self.dim)) @ self.uniform_cov.sqrt.T
        ratios = np.exp(np.atleast_1d(self.log_ratio(draws)))
        return MonteCarloEstimate(mean=float(np.mean(ratios)),
                                  std_error=float(np.std(ratios, ddof=1) / np.sqrt(n)), n=n)


def predictive_logpdf(pd: PredictiveDensity, y_tilde) -> Union[float, np.ndarray]:
    return pd.logpdf(y_tilde)


def predictive_sample(pd: PredictiveDensity, rng: np.random.Generator, size: int = 1) -> PredictiveDraws:
    return pd.sample(rng, size)


def normalization_check(pd: PredictiveDensity, n: int, rng: np.random.Generator) -> MonteCarloEstimate:
    return pd.normalization_check(n, rng)


def plugin_logpdf(y_tilde, mu_hat, sigma_tilde: Covariance) -> Union[float, np.ndarray]:
    """log N(y_tilde; mu_hat, Sigma_tilde), the plug-in density at the MLE."""
    return gaussian_logpdf(y_tilde, mu_hat, sigma_tilde)


def direct_predictive_logpdf_mc(prior: Prior, y, sigma: SpdMatrix, sigma_tilde: Covariance, y_tilde,
                                n: int, rng: np.random.Generator) -> MonteCarloEstimate:
    """Ratio estimate of int N(y_tilde; mu, Sigma_tilde) N(y; mu, Sigma) pi(mu) dmu / int N(y; mu, Sigma) pi(mu) dmu.

    Draws mu ~ N(y, Sigma); the standard error is the delta-method error of
    the log of the ratio. For a rank-deficient Sigma_tilde the support
    density of B^T y_tilde is estimated.

    Returns:
        MonteCarloEstimate whose mean is the log predictive density
    """
    y = as_vectors(y, sigma.dim, "y")
    y_tilde = as_vectors(y_tilde, sigma.dim, "y_tilde")
    basis = support_of(sigma_tilde)
    projected = project_covariance(sigma_tilde, basis)

    mu = y + rng.standard_normal((n, sigma.dim)) @ sigma.sqrt.T
    log_pi = np.atleast_1d(prior.log_density(mu))
    log_kernel = np.atleast_1d(gaussian_logpdf(y_tilde @ basis, mu @ basis, projected))
    shift = np.max(log_pi)
    g = np.exp(log_pi - shift)
    f = np.exp(log_kernel) * g

    ratio = np.mean(f) / np.mean(g)
    residual = f - ratio * g
    se_ratio = np.std(residual, ddof=1) / (np.sqrt(n) * np.mean(g))
    return MonteCarloEstimate(mean=float(np.log(ratio)), std_error=float(se_ratio / ratio), n=n)
