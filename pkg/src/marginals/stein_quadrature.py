"""
Batched quadrature for the Stein marginal

For pi_S(mu) = ||mu||^{-(d-2)}, a = (d-2)/2, C = Q diag(c) Q^T and
z_tilde = Q^T z, the Gamma-integral identity
||mu||^{-2a} = Gamma(a)^{-1} int_0^inf t^{a-1} exp(-t ||mu||^2) dt gives,
after u = 2t / (1 + 2t),

    m(z; C) = 2^{-a} / Gamma(a) int_0^1 u^{a-1} prod_i s_i^{-1/2}
              exp(-(u/2) sum_i z_tilde_i^2 / s_i) du,   s_i = 1 + (c_i - 1) u.

The substitution u = b v^2 turns u^{a-1} du into 2 b^a v^{d-3} dv, so the
v-integrand is smooth for every d >= 3. b truncates u where the exponent
passes ``quadrature_tail_exponent``. All rows of a batch share one
scipy.integrate.quad_vec call; each row is normalised by a coarse estimate
of its own integral so a single 'max' error norm is a per-row relative one.
"""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import quad_vec
from scipy.special import gammaln, logsumexp

from src.utils.errors import (
    DimensionMismatchError,
    InvalidInputError,
    MarginalNotFiniteError,
    QuadratureError,
)
from src.utils.settings import NumericalSettings, get_settings

logger = logging.getLogger(__name__)

_COARSE_GRID = np.linspace(1.0 / 64.0, 1.0, 64)


def _log_kernel(u: np.ndarray, z_sq: np.ndarray, c: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """log prod s^{-1/2} - (u/2) sum z^2/s, and s, for u of shape (n,) or (n, m)."""
    s = 1.0 + (c[..., None, :] - 1.0) * u[..., None] if u.ndim == 2 else 1.0 + (c - 1.0) * u[:, None]
    z = z_sq[..., None, :] if u.ndim == 2 else z_sq
    log_f = -0.5 * np.sum(np.log(s), axis=-1) - 0.5 * u * np.sum(z / s, axis=-1)
    return log_f, s


def _chunk(z_tilde: np.ndarray, c: np.ndarray, with_grad: bool,
           settings: NumericalSettings) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    n, d = z_tilde.shape
    a = 0.5 * (d - 2)
    z_sq = z_tilde**2
    q0 = np.sum(z_sq, axis=1)
    c_top = np.maximum(1.0, np.max(c, axis=1))
    c_low = np.minimum(1.0, np.min(c, axis=1))
    with np.errstate(divide="ignore"):
        b = np.where(q0 > 0.0, np.minimum(1.0, 2.0 * settings.quadrature_tail_exponent * c_top / q0), 1.0)

    grid_u = b[:, None] * _COARSE_GRID[None, :] ** 2
    coarse, _ = _log_kernel(grid_u, z_sq, c)
    coarse = coarse + (d - 3) * np.log(_COARSE_GRID)[None, :]
    log_norm = logsumexp(coarse, axis=1) - np.log(_COARSE_GRID.size)
    grad_scale = 1.0 + b * np.sqrt(q0) / c_low

    def integrand(v: float) -> np.ndarray:
        u = b * v * v
        log_f, s = _log_kernel(u, z_sq, c)
        weight = v ** (d - 3) * np.exp(log_f - log_norm)
        if not with_grad:
            return weight
        grad = weight[:, None] * (-u[:, None] * z_tilde / s) / grad_scale[:, None]
        return np.concatenate([weight, grad.ravel()])

    result, error, info = quad_vec(
        integrand, 0.0, 1.0,
        epsrel=settings.quadrature_epsrel,
        norm="max",
        limit=settings.quadrature_limit,
        full_output=True,
    )
    if not info.success:
        raise QuadratureError(f"Marginal quadrature did not converge: {info.message} (error {error:.3e})")

    integral = result[:n]
    if np.any(~np.isfinite(integral)) or np.any(integral <= 0.0):
        raise MarginalNotFiniteError("Stein marginal quadrature produced a non-positive or non-finite value")
    log_m = (1.0 - a) * np.log(2.0) - gammaln(a) + a * np.log(b) + log_norm + np.log(integral)
    if not with_grad:
        return log_m, None
    grad = result[n:].reshape(n, d) * grad_scale[:, None] / integral[:, None]
    return log_m, grad


def stein_log_marginal_whitened(z_tilde, c, with_grad: bool = False,
                                settings: Optional[NumericalSettings] = None
                                ) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """log m_S(z; C) in the eigenbasis of C, for a batch of (z_tilde, c) rows.

    Args:
        z_tilde: (n, d) arguments expressed in the eigenbasis of their C
        c: (n, d) eigenvalues of each C, or a single (d,) row shared by all
        with_grad: Also return the gradient with respect to z_tilde
        settings: Numerical settings

    Returns:
        (log_m of shape (n,), gradient of shape (n, d) or None)
    """
    settings = settings or get_settings()
    z_tilde = np.atleast_2d(np.asarray(z_tilde, dtype=float))
    n, d = z_tilde.shape
    if d < 3:
        raise DimensionMismatchError(f"Stein marginals need d >= 3, got d = {d}")
    c = np.broadcast_to(np.asarray(c, dtype=float), (n, d))
    if np.any(c <= 0.0):
        raise InvalidInputError("Covariance eigenvalues must be positive")

    step = settings.quadrature_chunk
    logs, grads = [], []
    for start in range(0, n, step):
        log_m, grad = _chunk(z_tilde[start:start + step], np.ascontiguousarray(c[start:start + step]),
                             with_grad, settings)
        logs.append(log_m)
        grads.append(grad)
    log_m = np.concatenate(logs)
    if not np.all(np.isfinite(log_m)):
        raise MarginalNotFiniteError("Stein marginal is not finite")
    return log_m, (np.concatenate(grads) if with_grad else None)
