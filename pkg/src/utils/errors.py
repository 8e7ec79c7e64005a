"""
Error hierarchy for shrinkage-lab

Every failure raised by the library derives from ShrinkageLabError and from the
closest builtin, so ``except ValueError`` at a call site keeps working.
"""


class ShrinkageLabError(Exception):
    """Base class for all library errors."""


class DimensionMismatchError(ShrinkageLabError, ValueError):
    """Array shapes do not agree."""


class NotPositiveDefiniteError(ShrinkageLabError, ValueError):
    """A matrix required to be definite has an eigenvalue below the floor."""


class RankDeficiencyError(ShrinkageLabError, ValueError):
    """A matrix has lower rank than the operation needs."""


class NotLoewnerOrderedError(ShrinkageLabError, ValueError):
    """Sigma_1 <= Sigma_2 does not hold in the Loewner order."""


class PriorPoleError(ShrinkageLabError, ValueError):
    """A prior was evaluated at its pole."""


class InfiniteDivergenceError(ShrinkageLabError, ArithmeticError):
    """The Kullback-Leibler divergence is infinite (incompatible supports)."""


class QuadratureError(ShrinkageLabError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""


class MarginalNotFiniteError(ShrinkageLabError, ArithmeticError):
    """A marginal density evaluated to a non-finite value."""


class SamplerError(ShrinkageLabError, ArithmeticError):
    """Rejection sampling accepted too few proposals."""


class ConfigError(ShrinkageLabError, ValueError):
    """Experiment configuration is invalid."""


class InvalidInputError(ShrinkageLabError, ValueError):
    """An argument is outside its valid domain (non-finite, asymmetric, nonpositive)."""
