"""
Design matrices for regression experiments
"""

import logging
from typing import Literal

import numpy as np

from src.utils.errors import InvalidInputError

logger = logging.getLogger(__name__)

DesignDistribution = Literal["std_normal_entries", "uniform_pm1"]


def draw_design(rng: np.random.Generator, dim: int, n_samples: int,
                distribution: DesignDistribution = "std_normal_entries") -> np.ndarray:
    """Draw a d x p design whose columns are the explanatory vectors.

    Args:
        rng: Random generator
        dim: Number of explanatory variables d
        n_samples: Number of samples p
        distribution: ``std_normal_entries`` (i.i.d. N(0, 1)) or ``uniform_pm1`` (i.i.d. U[-1, 1])

    Returns:
        Array of shape (d, p)
    """
    if distribution == "std_normal_entries":
        return rng.standard_normal((dim, n_samples))
    if distribution == "uniform_pm1":
        return rng.uniform(-1.0, 1.0, size=(dim, n_samples))
    raise InvalidInputError(f"Unknown design distribution: {distribution}")


def with_intercept(design: np.ndarray) -> np.ndarray:
    """Append a constant coordinate to every sample (a row of ones)."""
    design = np.atleast_2d(np.asarray(design, dtype=float))
    return np.vstack([design, np.ones((1, design.shape[1]))])
