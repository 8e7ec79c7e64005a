# Utilities: settings and error hierarchy
from .errors import (
    ConfigError,
    DimensionMismatchError,
    InfiniteDivergenceError,
    InvalidInputError,
    MarginalNotFiniteError,
    NotLoewnerOrderedError,
    NotPositiveDefiniteError,
    PriorPoleError,
    QuadratureError,
    RankDeficiencyError,
    SamplerError,
    ShrinkageLabError,
)
from .settings import NumericalSettings, get_settings, load_settings
