# Marginals: m_pi(z; C) by closed form, quadrature or Monte Carlo
from .marginal_evaluator import (
    MarginalEvaluator,
    MarginalMethod,
    MonteCarloMarginal,
    grad_log_marginal,
    log_marginal,
    log_marginal_mc_oracle,
    posterior_mean,
)
from .stein_quadrature import stein_log_marginal_whitened

log_marginal_batch_whitened = stein_log_marginal_whitened
