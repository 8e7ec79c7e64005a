# shrinkage-lab: Bayesian shrinkage predictive densities under changing covariances
__version__ = "0.1.0"
