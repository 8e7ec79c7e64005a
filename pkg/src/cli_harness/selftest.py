"""
Self-test oracle suite

Cross-checks between independent routes to the same quantity: quadrature
against brute-force Monte Carlo, the marginal-ratio predictive against direct
integration, the phi identity against nested risk estimates, conjugate closed
forms, A* algebra and the regression reduction. Each check reports one value
and a pass flag; checks comparing several points use a family-wise z limit.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np
from scipy.stats import norm

from src.gaussian_core import (
    LOG_2PI,
    SpdMatrix,
    gaussian_kl,
    gaussian_logpdf,
    heat_identity_check,
    semidefinite_normal_sample,
)
from src.marginals import MarginalEvaluator, log_marginal_mc_oracle, posterior_mean
from src.predictive import LinearGaussianPredictive, PredictiveDensity, direct_predictive_logpdf_mc
from src.priors import (
    GaussianRidgePrior,
    PriorSpec,
    RescaledSteinPrior,
    SteinPrior,
    UniformPrior,
    build_astar,
    rescaled_stein_identity_check,
    superharmonicity_check,
)
from src.regression import (
    FutureDesign,
    RegressionData,
    astar_regression_prior,
    reduce,
    reduce_future,
    ridge_estimator,
    three_point_data,
)
from src.risk import (
    WishartIdentity,
    bayes_risk_difference,
    closed_form_risk,
    direct_risk,
    phi_estimate,
    phi_monotonicity_check,
    risk_difference,
)
from src.utils.settings import NumericalSettings
from .results import ResultRow

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckOutcome:
    value: float
    passed: bool
    d: int
    se: float = 0.0
    n: int = 1
    detail: str = ""


CheckFunction = Callable[[np.random.Generator, NumericalSettings], CheckOutcome]


def z_limit(comparisons: int) -> float:
    """Two-sided z threshold that keeps the family-wise false alarm rate of 3 SE."""
    return float(norm.isf(0.00135 / max(comparisons, 1)))


def random_spd(rng: np.random.Generator, dim: int, scale: float = 1.0) -> SpdMatrix:
    """Well-conditioned random SPD matrix."""
    a = rng.standard_normal((dim, dim))
    return SpdMatrix.from_array(scale * (a @ a.T / dim + 0.5 * np.eye(dim)))


def _unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def _independent_pair(rng: np.random.Generator):
    seed = int(rng.integers(2**63))
    return np.random.default_rng(seed), np.random.default_rng(seed)


# Marginals

def check_stein_marginal_origin(rng, settings):
    value = float(np.exp(MarginalEvaluator(SteinPrior(3), SpdMatrix.identity(3), settings).log_marginal(np.zeros(3))))
    error = abs(value - np.sqrt(2.0 / np.pi))
    return CheckOutcome(value=value, passed=error <= 1e-3, d=3, detail=f"|m - sqrt(2/pi)| = {error:.2e}")


def check_mc_oracle_origin(rng, settings):
    mc = log_marginal_mc_oracle(SteinPrior(3), SpdMatrix.identity(3), np.zeros(3), 10**6, rng, settings)
    error = abs(mc.estimate - np.sqrt(2.0 / np.pi))
    return CheckOutcome(value=mc.estimate, se=mc.std_error, n=mc.n, d=3,
                        passed=error <= max(3.0 * mc.std_error, 1e-12) and error <= 3e-3,
                        detail=f"|m_mc - sqrt(2/pi)| = {error:.2e}")


def check_stein_far_field(rng, settings):
    z = 50.0 * _unit(rng, 5)
    value = float(MarginalEvaluator(SteinPrior(5), SpdMatrix.identity(5), settings).log_marginal(z)) + 3.0 * np.log(50.0)
    return CheckOutcome(value=value, passed=abs(value) <= 1e-3, d=5)


def check_quadrature_vs_mc(rng, settings):
    points = 20
    worst_z, worst_rel = 0.0, 0.0
    for k in range(points):
        prior = SteinPrior(3) if k % 2 == 0 else RescaledSteinPrior(random_spd(rng, 3))
        cov = random_spd(rng, 3)
        z = 1.5 * rng.standard_normal(3)
        quadrature = float(np.exp(MarginalEvaluator(prior, cov, settings).log_marginal(z)))
        mc = log_marginal_mc_oracle(prior, cov, z, 10**6, rng, settings)
        worst_z = max(worst_z, abs(quadrature - mc.estimate) / mc.std_error)
        worst_rel = max(worst_rel, abs(quadrature - mc.estimate) / quadrature)
    return CheckOutcome(value=worst_z, passed=worst_z <= z_limit(points) and worst_rel <= 0.01, d=3, n=points,
                        detail=f"max z = {worst_z:.2f}, max relative deviation = {worst_rel:.2e}")


def check_gradient_finite_difference(rng, settings):
    tight = settings.model_copy(update={"quadrature_epsrel": 1e-10, "fd_step": 1e-4})
    ev = MarginalEvaluator(SteinPrior(5), SpdMatrix.identity(5), tight)
    z = 2.0 * rng.standard_normal((10, 5))
    error = float(np.max(np.abs(ev.grad_log_marginal(z) - ev.finite_difference_grad(z))))
    return CheckOutcome(value=error, passed=error <= 1e-5, d=5, n=10)


def check_ridge_gradient(rng, settings):
    cov, lam = random_spd(rng, 4), 2.0
    z = rng.standard_normal((10, 4))
    expected = -z @ np.linalg.inv(cov.entries + np.eye(4) / lam)
    error = float(np.max(np.abs(MarginalEvaluator(GaussianRidgePrior(4, lam), cov, settings).grad_log_marginal(z)
                                - expected)))
    return CheckOutcome(value=error, passed=error <= 1e-8 * max(1.0, np.max(np.abs(expected))), d=4, n=10)


def check_finite_marginals(rng, settings):
    failures = []
    for d in range(3, 10):
        cov = random_spd(rng, d)
        priors = [UniformPrior(d), SteinPrior(d), RescaledSteinPrior(random_spd(rng, d)), GaussianRidgePrior(d, 1.0)]
        direction = _unit(rng, d)
        for prior in priors:
            values = MarginalEvaluator(prior, cov, settings).log_marginal(np.outer([0.0, 1.0, 1e3], direction))
            if not np.all(np.isfinite(values)):
                failures.append(f"{prior.kind} d={d}")
    return CheckOutcome(value=float(len(failures)), passed=not failures, d=9, detail=", ".join(failures))


# Posterior means and predictives

def check_stein_shrinkage_factor(rng, settings):
    y = 10.0 * _unit(rng, 5)
    factor = float(np.linalg.norm(posterior_mean(SteinPrior(5), y, SpdMatrix.identity(5), settings)) / 10.0)
    return CheckOutcome(value=factor, passed=1.0 - 3.0 / 100.0 - 0.01 < factor < 1.0, d=5)


def check_ridge_posterior_mean(rng, settings):
    sigma, lam = random_spd(rng, 4), 3.0
    y = rng.standard_normal(4)
    expected = np.linalg.solve(sigma.inverse + lam * np.eye(4), sigma.inverse @ y)
    error = float(np.max(np.abs(posterior_mean(GaussianRidgePrior(4, lam), y, sigma, settings) - expected)))
    return CheckOutcome(value=error, passed=error <= 1e-8, d=4)


def check_ridge_predictive(rng, settings):
    sigma, sigma_tilde, lam = random_spd(rng, 4), random_spd(rng, 4), 0.7
    y = rng.standard_normal(4)
    points = y + rng.standard_normal((10, 4))
    ratio = PredictiveDensity(GaussianRidgePrior(4, lam), y, sigma, sigma_tilde, settings).logpdf(points)
    conjugate = LinearGaussianPredictive.ridge(sigma, sigma_tilde, lam).logpdf(points, y)
    error = float(np.max(np.abs(ratio - conjugate)))
    return CheckOutcome(value=error, passed=error <= 1e-8, d=4, n=10)


def check_predictive_normalization(rng, settings):
    density = PredictiveDensity(SteinPrior(3), rng.standard_normal(3), SpdMatrix.identity(3),
                                SpdMatrix.identity(3), settings)
    check = density.normalization_check(200_000, rng)
    return CheckOutcome(value=check.mean, se=check.std_error, n=check.n, d=3, passed=abs(check.mean - 1.0) <= 0.01)


def check_ratio_vs_direct(rng, settings):
    configs = 5
    worst = 0.0
    for _ in range(configs):
        sigma, sigma_tilde = random_spd(rng, 3), random_spd(rng, 3)
        y = rng.standard_normal(3)
        y_tilde = y + rng.standard_normal(3)
        ratio = float(PredictiveDensity(SteinPrior(3), y, sigma, sigma_tilde, settings).logpdf(y_tilde))
        direct = direct_predictive_logpdf_mc(SteinPrior(3), y, sigma, sigma_tilde, y_tilde, 10**6, rng)
        worst = max(worst, abs(ratio - direct.mean) / direct.std_error)
    return CheckOutcome(value=worst, passed=worst <= z_limit(configs), d=3, n=configs, detail=f"max z = {worst:.2f}")


def check_sampler_mean(rng, settings):
    density = PredictiveDensity(SteinPrior(3), np.array([1.5, -0.5, 0.0]), SpdMatrix.identity(3),
                                SpdMatrix.identity(3), settings)
    draws = density.sample(rng, 10_000).samples
    se = np.std(draws, axis=0, ddof=1) / np.sqrt(len(draws))
    worst = float(np.max(np.abs(np.mean(draws, axis=0) - density.mean) / se))
    return CheckOutcome(value=worst, passed=worst <= z_limit(3), d=3, n=len(draws))


# Gaussian core

def check_sample_covariance(rng, settings):
    cov = random_spd(rng, 3)
    n = 100_000
    draws = semidefinite_normal_sample(np.zeros(3), cov, rng, size=n)
    sample = np.cov(draws, rowvar=False)
    diag = np.diag(cov.entries)
    se = np.sqrt((np.outer(diag, diag) + cov.entries**2) / n)
    worst = float(np.max(np.abs(sample - cov.entries)[np.triu_indices(3)] / se[np.triu_indices(3)]))
    return CheckOutcome(value=worst, passed=worst <= z_limit(6), d=3, n=n)


def check_gaussian_normalization(rng, settings):
    cov = random_spd(rng, 3)
    mean = rng.standard_normal(3)
    proposal = SpdMatrix.from_array(2.0 * cov.entries)
    n = 10**6
    draws = mean + rng.standard_normal((n, 3)) @ proposal.sqrt.T
    weights = np.exp(gaussian_logpdf(draws, mean, cov) - gaussian_logpdf(draws, mean, proposal))
    value, se = float(np.mean(weights)), float(np.std(weights, ddof=1) / np.sqrt(n))
    return CheckOutcome(value=value, se=se, n=n, d=3, passed=abs(value - 1.0) <= 0.01)


def check_kl_closed_form(rng, settings):
    value = gaussian_kl(np.zeros(3), SpdMatrix.identity(3), np.zeros(3), SpdMatrix.identity(3, 2.0))
    expected = 0.5 * (1.5 - 3.0 + 3.0 * np.log(2.0))
    return CheckOutcome(value=value, passed=abs(value - expected) <= 1e-12 and abs(value - 0.2897) <= 1e-4, d=3)


def check_kl_monte_carlo(rng, settings):
    n = 100_000
    s1, s2 = random_spd(rng, 3), random_spd(rng, 3)
    m1, m2 = rng.standard_normal(3), rng.standard_normal(3)
    x = m1 + rng.standard_normal((n, 3)) @ s1.sqrt.T
    values = gaussian_logpdf(x, m1, s1) - gaussian_logpdf(x, m2, s2)
    estimate, se = float(np.mean(values)), float(np.std(values, ddof=1) / np.sqrt(n))
    exact = gaussian_kl(m1, s1, m2, s2)
    return CheckOutcome(value=estimate, se=se, n=n, d=3, passed=abs(estimate - exact) <= 3.0 * se,
                        detail=f"closed form {exact:.6f}")


def check_heat_identity(rng, settings):
    worst = 0.0
    for _ in range(10):
        x, mu = rng.standard_normal(3), rng.standard_normal(3)
        a = rng.uniform(0.5, 2.0, size=3)
        derivative, half_laplacian = heat_identity_check(x, mu, a, h=1e-4)
        scale = float(np.exp(gaussian_logpdf(x, mu, SpdMatrix.from_array(np.diag(a))))) / float(np.min(a))
        worst = max(worst, abs(derivative - half_laplacian) / max(abs(half_laplacian), scale))
    return CheckOutcome(value=worst, passed=worst <= 1e-4, d=3, n=10)


# Priors and A*

def check_astar_factorization(rng, settings):
    worst = 0.0
    for _ in range(100):
        sigma_1 = random_spd(rng, 4)
        b = rng.standard_normal((4, 4))
        target = b @ b.T
        astar = build_astar(sigma_1, SpdMatrix.from_array(sigma_1.entries + target), settings)
        worst = max(worst, float(np.max(np.abs(astar.matrix @ astar.matrix.T - target)) / max(1.0, np.max(target))))
    return CheckOutcome(value=worst, passed=worst <= 1e-10, d=4, n=100)


def check_rescaled_stein_identity(rng, settings):
    worst = 0.0
    for _ in range(100):
        sigma_1 = random_spd(rng, 4)
        sigma_2 = SpdMatrix.from_array(sigma_1.entries + random_spd(rng, 4).entries)
        lhs, rhs = rescaled_stein_identity_check(sigma_1, sigma_2, rng.standard_normal(4), settings)
        worst = max(worst, abs(lhs - rhs))
    return CheckOutcome(value=worst, passed=worst <= 1e-9, d=4, n=100)


def check_stein_harmonic(rng, settings):
    points = np.stack([_unit(rng, 3) for _ in range(10)])
    report = superharmonicity_check(SteinPrior(3), points, 1e-3)
    worst = float(np.max(np.abs(report.laplacians)))
    return CheckOutcome(value=worst, passed=worst <= 1e-4, d=3, n=10)


def check_ridge_laplacian_sign(rng, settings):
    report = superharmonicity_check(GaussianRidgePrior(5, 1.0), [np.zeros(5)], 1e-3)
    return CheckOutcome(value=report.max_value, passed=report.max_value < 0.0, d=5)


# Risk

def check_phi_monotonicity(rng, settings):
    worst = -np.inf
    for mu in (np.zeros(3), np.array([2.0, 0.0, 0.0])):
        estimate = phi_monotonicity_check(SteinPrior(3), mu, 2.0, 1.0, 20_000, rng, settings)
        worst = max(worst, estimate.upper(z_limit(2)))
    return CheckOutcome(value=worst, passed=worst < 0.0, d=3, n=20_000, detail="largest upper bound of phi(2I) - phi(I)")


def check_risk_difference_negative(rng, settings):
    estimate = risk_difference(SteinPrior(5), np.zeros(5), SpdMatrix.identity(5), SpdMatrix.identity(5),
                               20_000, rng, settings=settings)
    return CheckOutcome(value=estimate.mean, se=estimate.std_error, n=estimate.n, d=5, passed=estimate.upper() < 0.0)


def check_uniform_risk_difference_zero(rng, settings):
    estimate = risk_difference(UniformPrior(4), rng.standard_normal(4), random_spd(rng, 4), random_spd(rng, 4),
                               100, rng, settings=settings)
    return CheckOutcome(value=estimate.mean, se=estimate.std_error, n=estimate.n, d=4,
                        passed=estimate.mean == 0.0 and estimate.std_error == 0.0)


def check_risk_difference_vs_direct(rng, settings):
    configs = 5
    worst = 0.0
    for _ in range(configs):
        mu = rng.standard_normal(3)
        sigma, sigma_tilde = random_spd(rng, 3), random_spd(rng, 3)
        phi_route = risk_difference(SteinPrior(3), mu, sigma, sigma_tilde, 20_000, rng, settings=settings)
        prior_rng, uniform_rng = _independent_pair(rng)
        nested = direct_risk(SteinPrior(3), mu, sigma, sigma_tilde, 2000, 20, prior_rng, settings)
        baseline = direct_risk(UniformPrior(3), mu, sigma, sigma_tilde, 2000, 20, uniform_rng, settings)
        se = np.sqrt(phi_route.std_error**2 + nested.std_error**2 + baseline.std_error**2)
        worst = max(worst, abs(phi_route.mean - (nested.mean - baseline.mean)) / se)
    return CheckOutcome(value=worst, passed=worst <= z_limit(configs), d=3, n=configs, detail=f"max z = {worst:.2f}")


def check_direct_risk_stein_below_uniform(rng, settings):
    identity = SpdMatrix.identity(5)
    prior_rng, uniform_rng = _independent_pair(rng)
    stein = direct_risk(SteinPrior(5), np.zeros(5), identity, identity, 1000, 20, prior_rng, settings)
    uniform = direct_risk(UniformPrior(5), np.zeros(5), identity, identity, 1000, 20, uniform_rng, settings)
    gap = stein.mean - uniform.mean
    se = float(np.hypot(stein.std_error, uniform.std_error))
    return CheckOutcome(value=gap, se=se, n=1000, d=5, passed=gap + 3.0 * se < 0.0)


def check_plugin_risk(rng, settings):
    cov = SpdMatrix.identity(4, 2.0)
    mu = rng.standard_normal(4)
    plugin = LinearGaussianPredictive.plugin(cov)
    exact = closed_form_risk(mu, cov, mu, cov, plugin).mean
    mc = direct_risk(plugin, mu, cov, cov, 20_000, 1, rng, settings)
    return CheckOutcome(value=exact, se=mc.std_error, n=mc.n, d=4,
                        passed=abs(exact - 2.0) <= 1e-12 and abs(mc.mean - 2.0) <= 3.0 * mc.std_error,
                        detail=f"Monte Carlo {mc.mean:.4f}")


def check_ridge_phi_closed_form(rng, settings):
    cov, lam = random_spd(rng, 4), 1.5
    mu = rng.standard_normal(4)
    convolved = SpdMatrix.from_array(cov.entries + np.eye(4) / lam)
    exact = -0.5 * (4 * LOG_2PI + convolved.log_det
                    + float(np.sum(convolved.inverse * (cov.entries + np.outer(mu, mu)))))
    estimate = phi_estimate(GaussianRidgePrior(4, lam), mu, cov, 20_000, rng, settings)
    return CheckOutcome(value=estimate.mean, se=estimate.std_error, n=estimate.n, d=4,
                        passed=abs(estimate.mean - exact) <= 3.0 * estimate.std_error, detail=f"closed form {exact:.6f}")


def check_wishart_bayes_risk(rng, settings):
    spec = PriorSpec(type="rescaled_stein")
    ensemble = WishartIdentity(5)
    first_rng, second_rng = _independent_pair(rng)
    at_zero = bayes_risk_difference(spec, np.zeros(5), ensemble, ensemble, 1000, first_rng, settings)
    at_two = bayes_risk_difference(spec, 2.0 * np.eye(5)[0], ensemble, ensemble, 1000, second_rng, settings)
    decays = at_two.mean >= at_zero.mean - 3.0 * np.hypot(at_zero.std_error, at_two.std_error)
    return CheckOutcome(value=at_zero.mean, se=at_zero.std_error, n=at_zero.n, d=5,
                        passed=at_zero.upper() < 0.0 and decays, detail=f"at ||mu|| = 2: {at_two.mean:.4f}")


# Regression

def _random_data(rng, dim: int = 3, n_samples: int = 8, noise_variance: float = 1.0) -> RegressionData:
    return RegressionData(design=rng.standard_normal((dim, n_samples)), targets=rng.standard_normal(n_samples),
                          noise_variance=noise_variance)


def check_residual_orthogonality(rng, settings):
    data = _random_data(rng, 4, 12)
    y1, _ = reduce(data, settings)
    error = float(np.max(np.abs(data.design @ (data.targets - data.design.T @ y1))))
    return CheckOutcome(value=error, passed=error <= 1e-8, d=4)


def check_future_pseudo_inverse(rng, settings):
    variance = 2.0
    e1 = np.eye(3)[0]
    design = np.column_stack([e1, e1])
    _, sigma_tilde = reduce_future(FutureDesign(design=design, noise_variance=variance), settings)
    product = sigma_tilde.entries @ (design @ design.T) / variance
    error = float(np.max(np.abs(product @ product - product)))
    return CheckOutcome(value=error, passed=error <= 1e-10 and sigma_tilde.rank == 1, d=3)


def check_ridge_regression(rng, settings):
    worst = 0.0
    lam = 4.0
    for variance in (1.0, 2.5):
        data = _random_data(rng, 3, 8, variance)
        y1, sigma = reduce(data, settings)
        shrunk = posterior_mean(GaussianRidgePrior(3, lam / variance), y1, sigma, settings)
        worst = max(worst, float(np.max(np.abs(shrunk - ridge_estimator(data, lam)))))
    return CheckOutcome(value=worst, passed=worst <= 1e-8, d=3, n=2)


def check_astar_proportional_future(rng, settings):
    data = _random_data(rng, 3, 8)
    astar = astar_regression_prior(data, FutureDesign(design=data.design, noise_variance=0.5), settings)
    _, sigma = reduce(data, settings)
    reference = RescaledSteinPrior(sigma)
    points = rng.standard_normal((10, 3))
    base = rng.standard_normal(3)
    ours = astar.prior.log_density(points) - astar.prior.log_density(base)
    theirs = reference.log_density(points) - reference.log_density(base)
    error = float(np.max(np.abs(ours - theirs)))
    return CheckOutcome(value=error, passed=error <= 1e-9, d=3, n=10)


def check_three_point_mle(rng, settings):
    y1, _ = reduce(three_point_data(), settings)
    error = float(np.max(np.abs(y1 - np.array([1.0, 1.0, 0.0]))))
    return CheckOutcome(value=error, passed=error <= 1e-10, d=3)


SELFTEST_CHECKS: Dict[str, CheckFunction] = {
    "stein_marginal_origin": check_stein_marginal_origin,
    "mc_oracle_origin": check_mc_oracle_origin,
    "stein_far_field": check_stein_far_field,
    "quadrature_vs_mc": check_quadrature_vs_mc,
    "gradient_finite_difference": check_gradient_finite_difference,
    "ridge_gradient": check_ridge_gradient,
    "finite_marginals": check_finite_marginals,
    "stein_shrinkage_factor": check_stein_shrinkage_factor,
    "ridge_posterior_mean": check_ridge_posterior_mean,
    "ridge_predictive": check_ridge_predictive,
    "predictive_normalization": check_predictive_normalization,
    "ratio_vs_direct": check_ratio_vs_direct,
    "sampler_mean": check_sampler_mean,
    "sample_covariance": check_sample_covariance,
    "gaussian_normalization": check_gaussian_normalization,
    "kl_closed_form": check_kl_closed_form,
    "kl_monte_carlo": check_kl_monte_carlo,
    "heat_identity": check_heat_identity,
    "astar_factorization": check_astar_factorization,
    "rescaled_stein_identity": check_rescaled_stein_identity,
    "stein_harmonic": check_stein_harmonic,
    "ridge_laplacian_sign": check_ridge_laplacian_sign,
    "phi_monotonicity": check_phi_monotonicity,
    "risk_difference_negative": check_risk_difference_negative,
    "uniform_risk_difference_zero": check_uniform_risk_difference_zero,
    "risk_difference_vs_direct": check_risk_difference_vs_direct,
    "direct_risk_stein_below_uniform": check_direct_risk_stein_below_uniform,
    "plugin_risk": check_plugin_risk,
    "ridge_phi_closed_form": check_ridge_phi_closed_form,
    "wishart_bayes_risk": check_wishart_bayes_risk,
    "residual_orthogonality": check_residual_orthogonality,
    "future_pseudo_inverse": check_future_pseudo_inverse,
    "ridge_regression": check_ridge_regression,
    "astar_proportional_future": check_astar_proportional_future,
    "three_point_mle": check_three_point_mle,
}


def run_check(name: str, rng: np.random.Generator, seed: int,
              settings: NumericalSettings, check: Optional[CheckFunction] = None) -> ResultRow:
    """Run one named check and report it as a result row.

    Failing checks carry ``check failed`` in the error column; library errors
    raised inside a check propagate to the caller.
    """
    check = check or SELFTEST_CHECKS[name]
    outcome = check(rng, settings)
    level = logging.INFO if outcome.passed else logging.ERROR
    logger.log(level, f"selftest {name}: {'ok' if outcome.passed else 'FAILED'} (value {outcome.value:.6g})")
    error = "" if outcome.passed else f"check failed: {outcome.detail or 'value outside tolerance'}"
    return ResultRow(tag="selftest", d=outcome.d, beta_norm=0.0, density=name, estimate=float(outcome.value),
                     se=float(outcome.se), n=int(outcome.n), seed=seed, error=error)
