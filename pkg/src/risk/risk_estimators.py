"""
Kullback-Leibler risk estimators

The default route is the identity
R_KL(p_pi, mu) - R_KL(p_I, mu) = phi_pi(mu, Sigma) - phi_pi(mu, Sigma_w),
phi_pi(mu, C) = E_{z ~ N(mu, C)} log m_pi(z; C), estimated with one layer of
Monte Carlo and common random numbers for the two covariances. A nested
estimator of the defining integral serves as the oracle, and predictives of
the form N(A y + b, S) get their risk in closed form.
"""

import logging
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from src.gaussian_core import (
    Covariance,
    SpdMatrix,
    as_vectors,
    combine_covariance,
    combine_mean,
    gaussian_kl,
    project_covariance,
    semidefinite_normal_sample,
    support_logpdf,
    support_of,
    symmetrize,
)
from src.marginals import MarginalEvaluator, log_marginal_batch_whitened
from src.predictive import LinearGaussianPredictive
from src.priors import GaussianRidgePrior, Prior, PriorSpec, RescaledSteinPrior, SteinPrior, UniformPrior, resolve_prior
from src.utils.errors import InfiniteDivergenceError, NotPositiveDefiniteError
from src.utils.settings import NumericalSettings, get_settings
from .ensembles import CovarianceEnsemble
from .estimates import RiskEstimate

logger = logging.getLogger(__name__)

PriorLike = Union[Prior, PriorSpec]


def _is_stein_family(prior: Prior) -> bool:
    return isinstance(prior, (SteinPrior, RescaledSteinPrior))


def _log_marginal_rows(priors: Sequence[Prior], covs: Sequence[SpdMatrix], z: np.ndarray,
                       settings: NumericalSettings) -> np.ndarray:
    """log m_{pi_i}(z_i; C_i) row by row, one quadrature call when every prior is a Stein prior."""
    if all(_is_stein_family(p) for p in priors):
        rows = [MarginalEvaluator(p, c, settings).whitened(z_i) for p, c, z_i in zip(priors, covs, z)]
        z_tilde = np.concatenate([r[0] for r in rows])
        eigenvalues = np.stack([r[1] for r in rows])
        values, _ = log_marginal_batch_whitened(z_tilde, eigenvalues, settings=settings)
        return values
    return np.array([MarginalEvaluator(p, c, settings).log_marginal(z_i) for p, c, z_i in zip(priors, covs, z)])


def phi_estimate(prior: Prior, mu, cov: SpdMatrix, n: int, rng: np.random.Generator,
                 settings: Optional[NumericalSettings] = None) -> RiskEstimate:
    """Monte Carlo phi_pi(mu, C) = E log m_pi(z; C), z ~ N(mu, C)."""
    settings = settings or get_settings()
    mu = as_vectors(mu, cov.dim, "mu")
    z = mu + rng.standard_normal((n, cov.dim)) @ cov.sqrt.T
    values = MarginalEvaluator(prior, cov, settings).log_marginal(z)
    return RiskEstimate.from_samples(values, "phi")


def phi_monotonicity_check(prior: Prior, mu, v1: float, v2: float, n: int, rng: np.random.Generator,
                           settings: Optional[NumericalSettings] = None) -> RiskEstimate:
    """phi_pi(mu, v1 I) - phi_pi(mu, v2 I) with shared draws.

    Nonpositive for v1 > v2 when pi is superharmonic.
    """
    settings = settings or get_settings()
    mu = as_vectors(mu, prior.dim, "mu")
    eps = rng.standard_normal((n, prior.dim))
    first = MarginalEvaluator(prior, SpdMatrix.identity(prior.dim, v1), settings).log_marginal(mu + np.sqrt(v1) * eps)
    second = MarginalEvaluator(prior, SpdMatrix.identity(prior.dim, v2), settings).log_marginal(mu + np.sqrt(v2) * eps)
    return RiskEstimate.from_samples(first - second, "phi_difference")


def risk_difference(prior: Prior, mu, sigma: SpdMatrix, sigma_tilde: Covariance, n: int,
                    rng: np.random.Generator, pinv_ridge: Optional[float] = None,
                    settings: Optional[NumericalSettings] = None) -> RiskEstimate:
    """R_KL(p_pi, mu) - R_KL(p_I, mu) = phi_pi(mu, Sigma) - phi_pi(mu, Sigma_w).

    Negative values mean the prior improves on the uniform prior.

    Args:
        prior: Prior on mu
        mu: True mean
        sigma: Training covariance
        sigma_tilde: Future covariance, possibly rank deficient
        n: Number of replications
        rng: Random generator; the same draws drive both covariances
        pinv_ridge: Use (S^2 + eps I)^{-1} S in place of the pseudo-inverse
        settings: Numerical settings

    Returns:
        RiskEstimate of the difference
    """
    settings = settings or get_settings()
    mu = as_vectors(mu, sigma.dim, "mu")
    sigma_w = combine_covariance(sigma, sigma_tilde, pinv_ridge)
    eps = rng.standard_normal((n, sigma.dim))
    at_sigma = MarginalEvaluator(prior, sigma, settings).log_marginal(mu + eps @ sigma.sqrt.T)
    at_sigma_w = MarginalEvaluator(prior, sigma_w, settings).log_marginal(mu + eps @ sigma_w.sqrt.T)
    return RiskEstimate.from_samples(at_sigma - at_sigma_w, "risk_difference")


def _as_linear_gaussian(density, sigma: SpdMatrix, sigma_tilde: Covariance) -> Optional[LinearGaussianPredictive]:
    if isinstance(density, LinearGaussianPredictive):
        return density
    if isinstance(density, UniformPrior):
        return LinearGaussianPredictive.uniform(sigma, sigma_tilde)
    if isinstance(density, GaussianRidgePrior):
        return LinearGaussianPredictive.ridge(sigma, sigma_tilde, density.lam)
    return None


def _projected(cov: Covariance, basis: np.ndarray) -> SpdMatrix:
    try:
        return project_covariance(cov, basis)
    except NotPositiveDefiniteError as e:
        raise InfiniteDivergenceError(f"Predictive covariance is singular on the future support: {e}") from e


def direct_risk(density: Union[Prior, LinearGaussianPredictive], mu, sigma: SpdMatrix, sigma_tilde: Covariance,
                n_outer: int, n_inner: int, rng: np.random.Generator,
                settings: Optional[NumericalSettings] = None) -> RiskEstimate:
    """Nested Monte Carlo of R_KL = E_y KL(N(mu, Sigma_tilde) || p(. | y)).

    Gaussian predictives use the closed-form divergence per y; other priors
    average log N(y_tilde; mu, Sigma_tilde) - log p_pi(y_tilde | y) over
    n_inner future draws. A rank-deficient Sigma_tilde is handled on its support.
    """
    settings = settings or get_settings()
    mu = as_vectors(mu, sigma.dim, "mu")
    basis = support_of(sigma_tilde)
    y = mu + rng.standard_normal((n_outer, sigma.dim)) @ sigma.sqrt.T

    linear = _as_linear_gaussian(density, sigma, sigma_tilde)
    if linear is not None:
        offset = gaussian_kl(mu, sigma_tilde, mu, linear.cov)
        spread = _projected(linear.cov, basis)
        values = offset + 0.5 * spread.quad_form((linear.mean(y) - mu) @ basis)
        return RiskEstimate.from_samples(values, "risk")

    prior = density
    sigma_w = combine_covariance(sigma, sigma_tilde)
    uniform_cov = SpdMatrix.from_array(symmetrize(sigma.entries + sigma_tilde.entries))
    log_m_y = MarginalEvaluator(prior, sigma, settings).log_marginal(y)

    y_rep = np.repeat(y, n_inner, axis=0)
    y_tilde = semidefinite_normal_sample(mu, sigma_tilde, rng, size=n_outer * n_inner)
    w = combine_mean(sigma, sigma_tilde, sigma_w, y_rep, y_tilde)
    log_pred = (support_logpdf(y_tilde, y_rep, uniform_cov, basis)
                + MarginalEvaluator(prior, sigma_w, settings).log_marginal(w)
                - np.repeat(log_m_y, n_inner))
    log_true = support_logpdf(y_tilde, mu, sigma_tilde, basis)
    values = np.mean((log_true - log_pred).reshape(n_outer, n_inner), axis=1)
    return RiskEstimate.from_samples(values, "risk")


def closed_form_risk(mu, sigma_tilde: Covariance, y_mean, y_cov, predictive: LinearGaussianPredictive) -> RiskEstimate:
    """Exact E_y KL(N(mu, Sigma_tilde) || N(A y + b, S)) for y ~ N(y_mean, y_cov).

    Args:
        mu: Mean of the future observation
        sigma_tilde: Covariance of the future observation, possibly rank deficient
        y_mean: Mean of the training observation
        y_cov: Covariance of the training observation (matrix or SpdMatrix)
        predictive: Linear-Gaussian predictive density

    Returns:
        Exact RiskEstimate (std_error 0)
    """
    basis = support_of(sigma_tilde)
    k = basis.shape[1]
    truth = project_covariance(sigma_tilde, basis)
    spread = _projected(predictive.cov, basis)
    y_cov = y_cov.entries if hasattr(y_cov, "entries") else np.asarray(y_cov, dtype=float)

    bias = (predictive.mean(y_mean) - np.asarray(mu, dtype=float)) @ basis
    gain = basis.T @ predictive.a
    trace_truth = float(np.sum(spread.inverse * truth.entries))
    trace_noise = float(np.sum(spread.inverse * (gain @ y_cov @ gain.T)))
    value = 0.5 * (trace_truth - k + float(spread.quad_form(bias)) + trace_noise + spread.log_det - truth.log_det)
    return RiskEstimate.exact_value(value, "risk")


def _ensemble_draws(ens_sigma: CovarianceEnsemble, ens_tilde: CovarianceEnsemble, n: int,
                    rng: np.random.Generator) -> Tuple[List[SpdMatrix], List[Covariance], np.ndarray]:
    sigmas, tildes = [], []
    for _ in range(n):
        sigmas.append(ens_sigma.sample(rng))
        tildes.append(ens_tilde.sample(rng))
    eps = rng.standard_normal((n, ens_sigma.dim))
    return sigmas, tildes, eps


def _resolve(prior: PriorLike, sigma: SpdMatrix, noise_variance: float) -> Prior:
    if isinstance(prior, PriorSpec):
        return resolve_prior(prior, sigma.dim, train_cov=sigma, noise_variance=noise_variance)
    return prior


def _phi_differences(priors: List[Prior], sigmas: List[SpdMatrix], tildes: List[Covariance],
                     mu: np.ndarray, eps: np.ndarray, settings: NumericalSettings) -> np.ndarray:
    sigma_ws = [combine_covariance(s, t) for s, t in zip(sigmas, tildes)]
    if all(isinstance(p, UniformPrior) for p in priors):
        return np.zeros(len(priors))
    z = np.stack([mu + e @ s.sqrt.T for e, s in zip(eps, sigmas)])
    z_w = np.stack([mu + e @ s.sqrt.T for e, s in zip(eps, sigma_ws)])
    return (_log_marginal_rows(priors, sigmas, z, settings)
            - _log_marginal_rows(priors, sigma_ws, z_w, settings))


def bayes_risk_difference(prior: PriorLike, mu, ens_sigma: CovarianceEnsemble, ens_tilde: CovarianceEnsemble,
                          n: int, rng: np.random.Generator,
                          settings: Optional[NumericalSettings] = None) -> RiskEstimate:
    """Ensemble average of phi_pi(mu, Sigma) - phi_pi(mu, Sigma_w) over (Sigma, Sigma_tilde) draws.

    A PriorSpec is resolved per draw, so ``rescaled_stein`` with
    ``sigma_star="train_cov"`` follows each drawn Sigma.
    """
    settings = settings or get_settings()
    mu = as_vectors(mu, ens_sigma.dim, "mu")
    for ensemble in (ens_sigma, ens_tilde):
        if not ensemble.is_rotation_invariant:
            logger.warning(f"Ensemble {ensemble.tag} is not rotation invariant")
    noise_variance = getattr(ens_sigma, "noise_variance", 1.0)
    sigmas, tildes, eps = _ensemble_draws(ens_sigma, ens_tilde, n, rng)
    priors = [_resolve(prior, s, noise_variance) for s in sigmas]
    values = _phi_differences(priors, sigmas, tildes, mu, eps, settings)
    return RiskEstimate.from_samples(values, "bayes_risk_difference")


def bayes_risk(spec: PriorSpec, mu, ens_sigma: CovarianceEnsemble, ens_tilde: CovarianceEnsemble,
               n: int, rng: np.random.Generator, settings: Optional[NumericalSettings] = None) -> RiskEstimate:
    """Ensemble average of the KL risk of one predictive density.

    Uniform, ridge and plug-in risks are exact per draw; Stein priors add the
    phi difference of that draw to the exact uniform risk.
    """
    settings = settings or get_settings()
    mu = as_vectors(mu, ens_sigma.dim, "mu")
    noise_variance = getattr(ens_sigma, "noise_variance", 1.0)
    sigmas, tildes, eps = _ensemble_draws(ens_sigma, ens_tilde, n, rng)

    if spec.is_plugin:
        values = np.array([
            closed_form_risk(mu, t, mu, s, LinearGaussianPredictive.plugin(t)).mean for s, t in zip(sigmas, tildes)
        ])
        return RiskEstimate.from_samples(values, "bayes_risk")

    priors = [_resolve(spec, s, noise_variance) for s in sigmas]
    if isinstance(priors[0], GaussianRidgePrior):
        values = np.array([
            closed_form_risk(mu, t, mu, s, LinearGaussianPredictive.ridge(s, t, p.lam)).mean
            for p, s, t in zip(priors, sigmas, tildes)
        ])
    else:
        uniform = np.array([
            closed_form_risk(mu, t, mu, s, LinearGaussianPredictive.uniform(s, t)).mean
            for s, t in zip(sigmas, tildes)
        ])
        values = uniform + _phi_differences(priors, sigmas, tildes, mu, eps, settings)
    return RiskEstimate.from_samples(values, "bayes_risk")
