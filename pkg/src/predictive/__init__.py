# Predictive: Bayesian predictive densities, rejection sampling, plug-in and linear-Gaussian predictives
from .predictive_density import (
    MonteCarloEstimate,
    PredictiveDensity,
    PredictiveDraws,
    direct_predictive_logpdf_mc,
    normalization_check,
    plugin_logpdf,
    predictive_logpdf,
    predictive_sample,
)
from .linear_gaussian import LinearGaussianPredictive
