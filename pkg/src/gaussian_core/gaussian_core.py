"""
Gaussian substrate for shrinkage prediction

Combined statistic (w, Sigma_w), Gaussian log-densities on full and degenerate
supports, the uniform-prior predictive density, Gaussian Kullback-Leibler
divergence and sampling from semi-definite Normals.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from src.utils.errors import (
    DimensionMismatchError,
    InfiniteDivergenceError,
    InvalidInputError,
    NotPositiveDefiniteError,
)
from .matrices import PsdMatrix, SpdMatrix, symmetrize

logger = logging.getLogger(__name__)

LOG_2PI = float(np.log(2.0 * np.pi))
Covariance = Union[SpdMatrix, PsdMatrix]


def as_vectors(x, dim: int, name: str = "x") -> np.ndarray:
    """Coerce to a (d,) vector or an (n, d) batch, checking the trailing dimension."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim not in (1, 2) or arr.shape[-1] != dim:
        raise DimensionMismatchError(f"{name} has shape {arr.shape}, expected (..., {dim})")
    return arr


def future_precision(cov: Covariance, pinv_ridge: Optional[float] = None) -> np.ndarray:
    """Inverse (definite) or Moore-Penrose pseudo-inverse (semi-definite) of a future covariance."""
    if isinstance(cov, SpdMatrix):
        return cov.inverse
    if pinv_ridge is not None:
        return cov.ridge_pseudo_inverse(pinv_ridge)
    return cov.pseudo_inverse


@dataclass(frozen=True, eq=False)
class CombinedStat:
    """Precision-weighted combination of a training and a future observation."""

    w: np.ndarray
    sigma_w: SpdMatrix


def combine_covariance(sigma: SpdMatrix, sigma_tilde: Covariance,
                       pinv_ridge: Optional[float] = None) -> SpdMatrix:
    """Sigma_w = (Sigma^{-1} + Sigma_tilde^dagger)^{-1}."""
    if sigma.dim != sigma_tilde.dim:
        raise DimensionMismatchError(f"Covariance dimensions differ: {sigma.dim} vs {sigma_tilde.dim}")
    precision = SpdMatrix.from_array(symmetrize(sigma.inverse + future_precision(sigma_tilde, pinv_ridge)))
    return SpdMatrix.from_array(precision.inverse)


def combine_mean(sigma: SpdMatrix, sigma_tilde: Covariance, sigma_w: SpdMatrix, y, y_tilde,
                 pinv_ridge: Optional[float] = None) -> np.ndarray:
    """w = Sigma_w (Sigma^{-1} y + Sigma_tilde^dagger y_tilde); y_tilde may be a batch."""
    y = as_vectors(y, sigma.dim, "y")
    y_tilde = as_vectors(y_tilde, sigma.dim, "y_tilde")
    natural = sigma.inverse @ y if y.ndim == 1 else y @ sigma.inverse
    natural = natural + y_tilde @ future_precision(sigma_tilde, pinv_ridge)
    return natural @ sigma_w.entries


def combine(sigma: SpdMatrix, sigma_tilde: Covariance, y, y_tilde,
            pinv_ridge: Optional[float] = None) -> CombinedStat:
    """Combine a training observation y and a future observation y_tilde.

    Args:
        sigma: Training covariance (definite)
        sigma_tilde: Future covariance, possibly rank deficient
        y: Training observation
        y_tilde: Future observation (a (d,) vector or an (n, d) batch)
        pinv_ridge: Optional Tikhonov regularisation of the pseudo-inverse

    Returns:
        CombinedStat with w and Sigma_w
    """
    sigma_w = combine_covariance(sigma, sigma_tilde, pinv_ridge)
    return CombinedStat(w=combine_mean(sigma, sigma_tilde, sigma_w, y, y_tilde, pinv_ridge), sigma_w=sigma_w)


def gaussian_logpdf(x, mean, cov: Covariance) -> Union[float, np.ndarray]:
    """log N(x; mean, cov) for a vector or an (n, d) batch.

    A rank-deficient covariance gives the density on the affine support
    mean + range(cov) with respect to k-dimensional Lebesgue measure; points
    off that support get -inf.
    """
    x = as_vectors(x, cov.dim)
    r = x - as_vectors(mean, cov.dim, "mean")
    if isinstance(cov, SpdMatrix):
        value = -0.5 * (cov.dim * LOG_2PI + cov.log_det + cov.quad_form(r))
    else:
        quad = np.einsum("...i,ij,...j->...", r, cov.pseudo_inverse, r)
        value = -0.5 * (cov.rank * LOG_2PI + cov.log_pdet + quad)
        if not cov.is_full_rank:
            off = np.linalg.norm(r @ cov.null_basis, axis=-1)
            scale = np.maximum(1.0, np.linalg.norm(r, axis=-1))
            value = np.where(off > 1e-8 * scale, -np.inf, value)
    return float(value) if np.ndim(value) == 0 else value


def support_of(cov: Covariance) -> np.ndarray:
    """Orthonormal basis of range(cov); the identity for a full-rank covariance."""
    if isinstance(cov, SpdMatrix) or cov.is_full_rank:
        return np.eye(cov.dim)
    return cov.support_basis


def project_covariance(cov, basis: np.ndarray) -> SpdMatrix:
    """B^T cov B as a definite matrix; raises NotPositiveDefiniteError otherwise."""
    entries = cov.entries if hasattr(cov, "entries") else np.asarray(cov, dtype=float)
    return SpdMatrix.from_array(symmetrize(basis.T @ entries @ basis))


def support_logpdf(x, mean, cov, basis: np.ndarray) -> Union[float, np.ndarray]:
    """log-density of B^T x under N(B^T mean, B^T cov B)."""
    projected = project_covariance(cov, basis)
    return gaussian_logpdf(np.asarray(x, dtype=float) @ basis, np.asarray(mean, dtype=float) @ basis, projected)


def uniform_predictive_logpdf(y_tilde, y, sigma: SpdMatrix, sigma_tilde: Covariance) -> Union[float, np.ndarray]:
    """log p_I(y_tilde | y) = log N(y_tilde; y, Sigma + Sigma_tilde)."""
    if sigma.dim != sigma_tilde.dim:
        raise DimensionMismatchError(f"Covariance dimensions differ: {sigma.dim} vs {sigma_tilde.dim}")
    total = SpdMatrix.from_array(symmetrize(sigma.entries + sigma_tilde.entries))
    return gaussian_logpdf(y_tilde, y, total)


def gaussian_kl(mu1, s1: Covariance, mu2, s2: Covariance) -> float:
    """KL(N(mu1, s1) || N(mu2, s2)).

    For a rank-deficient s1 the divergence is taken between the laws of B^T x,
    B an orthonormal basis of range(s1). If s2 carries no mass along some
    support direction of s1 the divergence is infinite and
    InfiniteDivergenceError is raised.
    """
    if s1.dim != s2.dim:
        raise DimensionMismatchError(f"Covariance dimensions differ: {s1.dim} vs {s2.dim}")
    mu1 = as_vectors(mu1, s1.dim, "mu1")
    mu2 = as_vectors(mu2, s1.dim, "mu2")
    basis = support_of(s1)
    k = basis.shape[1]
    try:
        s2p = project_covariance(s2, basis)
    except NotPositiveDefiniteError as e:
        raise InfiniteDivergenceError(f"Second covariance is singular on the first support: {e}") from e
    s1p = project_covariance(s1, basis)
    delta = (mu2 - mu1) @ basis
    trace = float(np.sum(s2p.inverse * s1p.entries))
    return 0.5 * (trace - k + float(s2p.quad_form(delta)) + s2p.log_det - s1p.log_det)


def semidefinite_normal_sample(mu, cov: Covariance, rng: np.random.Generator,
                               size: Optional[int] = None) -> np.ndarray:
    """Draw mu + L z with L L^T = cov and z standard normal in rank(cov) dimensions."""
    mu = as_vectors(mu, cov.dim, "mu")
    factor = cov.sqrt if isinstance(cov, SpdMatrix) else cov.support_factor
    shape = (factor.shape[1],) if size is None else (size, factor.shape[1])
    return mu + rng.standard_normal(shape) @ factor.T


def heat_identity_check(x, mu, a, h: float = 1e-4) -> Tuple[float, float]:
    """Central-difference check that sum_i dN/da_i equals half the Laplacian of N.

    N is the Normal density N(x; mu, diag(a)).

    Returns:
        (sum of covariance derivatives, half the Laplacian in x)
    """
    x = np.asarray(x, dtype=float)
    mu = np.asarray(mu, dtype=float)
    a = np.asarray(a, dtype=float)
    if h <= 0 or np.any(a <= h):
        raise InvalidInputError("Step must be positive and smaller than every variance")

    def density(point, variances):
        return float(np.exp(gaussian_logpdf(point, mu, SpdMatrix.from_array(np.diag(variances)))))

    base = density(x, a)
    cov_derivative = 0.0
    laplacian = 0.0
    for i in range(x.size):
        step = np.zeros_like(x)
        step[i] = h
        cov_derivative += (density(x, a + step) - density(x, a - step)) / (2.0 * h)
        laplacian += (density(x + step, a) + density(x - step, a) - 2.0 * base) / h**2
    return cov_derivative, 0.5 * laplacian
