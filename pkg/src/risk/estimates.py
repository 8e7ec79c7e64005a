"""
Monte Carlo risk estimates
"""

from dataclasses import dataclass
from typing import Literal

import numpy as np

from src.utils.errors import InvalidInputError

Quantity = Literal["risk", "risk_difference", "bayes_risk", "bayes_risk_difference", "phi", "phi_difference"]


@dataclass(frozen=True)
class RiskEstimate:
    """Replication mean with its standard error; ``exact`` marks closed-form values."""

    mean: float
    std_error: float
    n: int
    quantity: Quantity = "risk"
    exact: bool = False

    def __post_init__(self):
        if self.std_error < 0:
            raise InvalidInputError(f"Standard error must be nonnegative, got {self.std_error}")
        if not self.exact and self.n < 2:
            raise InvalidInputError(f"Monte Carlo estimates need n >= 2, got {self.n}")

    @classmethod
    def from_samples(cls, values: np.ndarray, quantity: Quantity = "risk") -> "RiskEstimate":
        values = np.asarray(values, dtype=float).ravel()
        n = values.size
        std_error = float(np.std(values, ddof=1) / np.sqrt(n)) if n > 1 else 0.0
        return cls(mean=float(np.mean(values)), std_error=std_error, n=n, quantity=quantity)

    @classmethod
    def exact_value(cls, value: float, quantity: Quantity = "risk") -> "RiskEstimate":
        return cls(mean=float(value), std_error=0.0, n=1, quantity=quantity, exact=True)

    def upper(self, k: float = 3.0) -> float:
        return self.mean + k * self.std_error

    def lower(self, k: float = 3.0) -> float:
        return self.mean - k * self.std_error
