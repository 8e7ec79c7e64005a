"""
Symmetric matrices with cached spectral data

SpdMatrix holds a training covariance (or Sigma_w); PsdMatrix holds a future
covariance that may be rank deficient. Both factorize once at construction.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.utils.errors import (
    DimensionMismatchError,
    InvalidInputError,
    NotPositiveDefiniteError,
    RankDeficiencyError,
)
from src.utils.settings import NumericalSettings, get_settings

logger = logging.getLogger(__name__)


def symmetrize(a: np.ndarray) -> np.ndarray:
    """Return (a + a^T) / 2."""
    return 0.5 * (a + a.T)


def _validated_symmetric(a, settings: NumericalSettings) -> np.ndarray:
    arr = np.array(a, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatchError(f"Expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("Matrix has non-finite entries")
    scale = max(float(np.max(np.abs(arr))), np.finfo(float).tiny)
    asym = float(np.max(np.abs(arr - arr.T)))
    if asym > settings.symmetry_rtol * scale:
        raise InvalidInputError(f"Matrix is not symmetric (max asymmetry {asym:.3e})")
    return symmetrize(arr)


def _descending_eigh(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    values, vectors = np.linalg.eigh(a)
    return values[::-1].copy(), vectors[:, ::-1].copy()


def _spectral_product(vectors: np.ndarray, values: np.ndarray) -> np.ndarray:
    return symmetrize((vectors * values) @ vectors.T)


@dataclass(frozen=True, eq=False)
class SpdMatrix:
    """Symmetric positive-definite matrix with cached spectral data."""

    entries: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    log_det: float
    inverse: np.ndarray
    sqrt: np.ndarray
    inv_sqrt: np.ndarray

    @classmethod
    def from_array(cls, a, settings: Optional[NumericalSettings] = None) -> "SpdMatrix":
        """Validate and factorize a symmetric positive-definite matrix.

        Args:
            a: Square array-like
            settings: Numerical settings (tolerances)

        Returns:
            SpdMatrix with eigenvalues sorted in descending order
        """
        settings = settings or get_settings()
        arr = _validated_symmetric(a, settings)
        values, vectors = _descending_eigh(arr)
        floor = settings.definiteness_floor_rel * max(values[0], 0.0)
        if values[-1] <= floor or values[0] <= 0.0:
            raise NotPositiveDefiniteError(
                f"Smallest eigenvalue {values[-1]:.3e} is below the definiteness floor {floor:.3e}"
            )
        root = np.sqrt(values)
        return cls(
            entries=arr,
            eigenvalues=values,
            eigenvectors=vectors,
            log_det=float(np.sum(np.log(values))),
            inverse=_spectral_product(vectors, 1.0 / values),
            sqrt=_spectral_product(vectors, root),
            inv_sqrt=_spectral_product(vectors, 1.0 / root),
        )

    @classmethod
    def identity(cls, dim: int, scale: float = 1.0) -> "SpdMatrix":
        return cls.from_array(scale * np.eye(dim))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def quad_form(self, x: np.ndarray) -> np.ndarray:
        """x^T S^{-1} x for a vector or a batch of row vectors."""
        x = np.asarray(x, dtype=float)
        return np.einsum("...i,ij,...j->...", x, self.inverse, x)

    def congruence(self, other: "SpdMatrix") -> "SpdMatrix":
        """S^{-1/2} other S^{-1/2}, the whitened form of another covariance."""
        return SpdMatrix.from_array(symmetrize(self.inv_sqrt @ other.entries @ self.inv_sqrt))


@dataclass(frozen=True, eq=False)
class PsdMatrix:
    """Symmetric positive semi-definite matrix of rank k >= 1.

    Eigenvalues below ``definiteness_floor_rel * largest`` count as zero.
    """

    entries: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    rank: int
    support_factor: np.ndarray
    pseudo_inverse: np.ndarray
    log_pdet: float

    @classmethod
    def from_array(cls, a, settings: Optional[NumericalSettings] = None) -> "PsdMatrix":
        settings = settings or get_settings()
        arr = _validated_symmetric(a, settings)
        values, vectors = _descending_eigh(arr)
        if values[0] <= 0.0:
            raise RankDeficiencyError("Matrix has rank 0")
        floor = settings.definiteness_floor_rel * values[0]
        if values[-1] < -floor:
            raise NotPositiveDefiniteError(f"Matrix has a negative eigenvalue {values[-1]:.3e}")
        rank = int(np.sum(values > floor))
        kept = values[:rank]
        basis = vectors[:, :rank]
        return cls(
            entries=arr,
            eigenvalues=np.where(values > floor, values, 0.0),
            eigenvectors=vectors,
            rank=rank,
            support_factor=basis * np.sqrt(kept),
            pseudo_inverse=symmetrize((basis / kept) @ basis.T),
            log_pdet=float(np.sum(np.log(kept))),
        )

    @classmethod
    def from_spd(cls, s: SpdMatrix) -> "PsdMatrix":
        return cls.from_array(s.entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def is_full_rank(self) -> bool:
        return self.rank == self.dim

    @property
    def support_basis(self) -> np.ndarray:
        """Orthonormal d x k basis of the range."""
        return self.eigenvectors[:, : self.rank]

    @property
    def null_basis(self) -> np.ndarray:
        """Orthonormal d x (d-k) basis of the null space (the a_i)."""
        return self.eigenvectors[:, self.rank :]

    def to_spd(self) -> SpdMatrix:
        if not self.is_full_rank:
            raise RankDeficiencyError(f"Rank {self.rank} < dimension {self.dim}")
        return SpdMatrix.from_array(self.entries)

    def ridge_pseudo_inverse(self, eps: float) -> np.ndarray:
        """(S^2 + eps I)^{-1} S, which tends to the pseudo-inverse as eps -> 0."""
        if eps <= 0:
            raise InvalidInputError("eps must be positive")
        values = self.eigenvalues
        return _spectral_product(self.eigenvectors, values / (values**2 + eps))
