"""
Predictive densities of the form N(A y + b, S)

The uniform-prior, plug-in and Gaussian-ridge predictives are all Gaussian
with a mean linear in y, which gives them closed-form KL risks.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from src.gaussian_core import Covariance, SpdMatrix, as_vectors, gaussian_logpdf, support_logpdf, symmetrize
from src.utils.errors import InvalidInputError


@dataclass(frozen=True, eq=False)
class LinearGaussianPredictive:
    """p(y_tilde | y) = N(y_tilde; A y + b, S)."""

    a: np.ndarray
    b: np.ndarray
    cov: Covariance
    name: str = "linear_gaussian"

    @property
    def dim(self) -> int:
        return self.cov.dim

    def mean(self, y) -> np.ndarray:
        y = as_vectors(y, self.a.shape[1], "y")
        return y @ self.a.T + self.b

    def logpdf(self, y_tilde, y) -> Union[float, np.ndarray]:
        return gaussian_logpdf(y_tilde, self.mean(y), self.cov)

    def support_logpdf(self, y_tilde, y, basis: np.ndarray) -> Union[float, np.ndarray]:
        return support_logpdf(y_tilde, self.mean(y), self.cov, basis)

    @classmethod
    def uniform(cls, sigma: SpdMatrix, sigma_tilde: Covariance) -> "LinearGaussianPredictive":
        """p_I(y_tilde | y) = N(y, Sigma + Sigma_tilde)."""
        total = SpdMatrix.from_array(symmetrize(sigma.entries + sigma_tilde.entries))
        return cls(a=np.eye(sigma.dim), b=np.zeros(sigma.dim), cov=total, name="uniform")

    @classmethod
    def plugin(cls, sigma_tilde: Covariance) -> "LinearGaussianPredictive":
        """N(mu_hat, Sigma_tilde) with mu_hat = y."""
        return cls(a=np.eye(sigma_tilde.dim), b=np.zeros(sigma_tilde.dim), cov=sigma_tilde, name="plugin")

    @classmethod
    def ridge(cls, sigma: SpdMatrix, sigma_tilde: Covariance, lam: float) -> "LinearGaussianPredictive":
        """Conjugate predictive of N(0, lam^{-1} I): N(V Sigma^{-1} y, Sigma_tilde + V), V = (Sigma^{-1} + lam I)^{-1}."""
        if not lam > 0:
            raise InvalidInputError(f"Ridge precision must be positive, got {lam}")
        posterior = SpdMatrix.from_array(symmetrize(sigma.inverse + lam * np.eye(sigma.dim)))
        v = posterior.inverse
        total = SpdMatrix.from_array(symmetrize(sigma_tilde.entries + v))
        return cls(a=v @ sigma.inverse, b=np.zeros(sigma.dim), cov=total, name=f"ridge({lam:g})")
