# Gaussian core: matrices, combined statistic, Gaussian densities and divergences
from .matrices import PsdMatrix, SpdMatrix, symmetrize
from .gaussian_core import (
    LOG_2PI,
    CombinedStat,
    Covariance,
    as_vectors,
    combine,
    combine_covariance,
    combine_mean,
    future_precision,
    gaussian_kl,
    gaussian_logpdf,
    heat_identity_check,
    project_covariance,
    semidefinite_normal_sample,
    support_logpdf,
    support_of,
    uniform_predictive_logpdf,
)
