import numpy as np
import pytest

from src.gaussian_core import LOG_2PI, PsdMatrix, SpdMatrix
from src.predictive import LinearGaussianPredictive
from src.priors import GaussianRidgePrior, PriorSpec, SteinPrior, UniformPrior
from src.risk import (
    DesignInduced,
    RiskEstimate,
    WishartIdentity,
    bayes_risk,
    bayes_risk_difference,
    closed_form_risk,
    direct_risk,
    phi_estimate,
    phi_monotonicity_check,
    risk_difference,
)
from src.utils.errors import RankDeficiencyError


def random_spd(rng, dim):
    a = rng.standard_normal((dim, dim))
    return SpdMatrix.from_array(a @ a.T / dim + 0.5 * np.eye(dim))


def test_risk_estimate_from_samples():
    estimate = RiskEstimate.from_samples(np.array([1.0, 2.0, 3.0]), "phi")
    assert estimate.mean == 2.0
    assert estimate.std_error == pytest.approx(1.0 / np.sqrt(3.0))
    assert estimate.upper() == pytest.approx(2.0 + 3.0 / np.sqrt(3.0))
    assert RiskEstimate.exact_value(0.5).exact
    with pytest.raises(ValueError):
        RiskEstimate(mean=0.0, std_error=0.0, n=1)


def test_wishart_ensemble_mean_is_identity():
    rng = np.random.default_rng(0)
    ensemble = WishartIdentity(3)
    assert ensemble.degrees_of_freedom == 5
    draws = np.stack([ensemble.sample(rng).entries for _ in range(2000)])
    assert np.allclose(draws.mean(axis=0), np.eye(3), atol=0.1)
    with pytest.raises(ValueError):
        WishartIdentity(4, df=2)


def test_design_induced_roles():
    rng = np.random.default_rng(1)
    train = DesignInduced(dim=3, n_samples=10, noise_variance=2.0)
    future = DesignInduced(dim=3, n_samples=2, role="future")
    assert isinstance(train.sample(rng), SpdMatrix)
    sample = future.sample(rng)
    assert isinstance(sample, PsdMatrix) and sample.rank == 2
    assert not DesignInduced(dim=3, n_samples=10, distribution="uniform_pm1").is_rotation_invariant
    with pytest.raises(RankDeficiencyError):
        DesignInduced(dim=5, n_samples=3)


def test_ridge_phi_closed_form():
    rng = np.random.default_rng(2)
    cov, lam = random_spd(rng, 4), 1.5
    mu = rng.standard_normal(4)
    convolved = SpdMatrix.from_array(cov.entries + np.eye(4) / lam)
    exact = -0.5 * (4 * LOG_2PI + convolved.log_det + np.sum(convolved.inverse * (cov.entries + np.outer(mu, mu))))
    estimate = phi_estimate(GaussianRidgePrior(4, lam), mu, cov, 20_000, rng)
    assert abs(estimate.mean - exact) <= 3.0 * estimate.std_error


def test_phi_scaling_of_stein_prior_at_origin():
    estimate = phi_monotonicity_check(SteinPrior(3), np.zeros(3), 2.0, 1.0, 500, np.random.default_rng(3))
    assert estimate.mean == pytest.approx(-0.5 * np.log(2.0), abs=1e-6)
    assert estimate.quantity == "phi_difference"


def test_stein_risk_difference_at_origin():
    identity = SpdMatrix.identity(5)
    estimate = risk_difference(SteinPrior(5), np.zeros(5), identity, identity, 500, np.random.default_rng(4))
    assert estimate.mean == pytest.approx(-1.5 * np.log(2.0), abs=1e-6)


def test_stein_risk_difference_is_negative_for_proportional_covariances():
    estimate = risk_difference(SteinPrior(5), np.array([1.0, 0, 0, 0, 0]), SpdMatrix.identity(5),
                               SpdMatrix.identity(5, 2.0), 5000, np.random.default_rng(5))
    assert estimate.upper() < 0


def test_uniform_risk_difference_is_exactly_zero():
    rng = np.random.default_rng(6)
    estimate = risk_difference(UniformPrior(4), rng.standard_normal(4), random_spd(rng, 4), random_spd(rng, 4),
                               100, rng)
    assert estimate.mean == 0.0 and estimate.std_error == 0.0


def test_plugin_risk_is_half_dimension():
    cov = SpdMatrix.identity(4, 2.0)
    mu = np.arange(4.0)
    exact = closed_form_risk(mu, cov, mu, cov, LinearGaussianPredictive.plugin(cov))
    assert exact.exact
    assert exact.mean == pytest.approx(2.0, abs=1e-12)
    mc = direct_risk(LinearGaussianPredictive.plugin(cov), mu, cov, cov, 20_000, 1, np.random.default_rng(7))
    assert abs(mc.mean - 2.0) <= 3.0 * mc.std_error


def test_uniform_and_ridge_closed_forms_match_monte_carlo():
    rng = np.random.default_rng(8)
    sigma, sigma_tilde = random_spd(rng, 3), random_spd(rng, 3)
    mu = rng.standard_normal(3)
    for prior, predictive in ((UniformPrior(3), LinearGaussianPredictive.uniform(sigma, sigma_tilde)),
                              (GaussianRidgePrior(3, 2.0), LinearGaussianPredictive.ridge(sigma, sigma_tilde, 2.0))):
        exact = closed_form_risk(mu, sigma_tilde, mu, sigma, predictive).mean
        mc = direct_risk(prior, mu, sigma, sigma_tilde, 20_000, 1, rng)
        assert abs(mc.mean - exact) <= 4.0 * mc.std_error


def test_closed_form_risk_on_degenerate_future():
    e1 = np.eye(3)[0]
    sigma_tilde = PsdMatrix.from_array(np.outer(e1, e1))
    sigma = SpdMatrix.identity(3)
    value = closed_form_risk(np.zeros(3), sigma_tilde, np.zeros(3), sigma,
                             LinearGaussianPredictive.uniform(sigma, sigma_tilde)).mean
    # one-dimensional support: KL(N(0, 1) || N(y, 2)) averaged over y ~ N(0, 1)
    assert value == pytest.approx(0.5 * (0.5 - 1.0 + 0.5 + np.log(2.0)))


@pytest.mark.slow
def test_phi_identity_matches_nested_risk():
    rng = np.random.default_rng(9)
    mu = np.array([0.5, -0.3, 0.2])
    sigma, sigma_tilde = random_spd(rng, 3), random_spd(rng, 3)
    phi_route = risk_difference(SteinPrior(3), mu, sigma, sigma_tilde, 20_000, rng)
    nested = direct_risk(SteinPrior(3), mu, sigma, sigma_tilde, 2000, 20, np.random.default_rng(10))
    baseline = direct_risk(UniformPrior(3), mu, sigma, sigma_tilde, 2000, 20, np.random.default_rng(10))
    se = np.sqrt(phi_route.std_error**2 + nested.std_error**2 + baseline.std_error**2)
    assert abs(phi_route.mean - (nested.mean - baseline.mean)) <= 4.0 * se


def test_bayes_risk_decomposes_into_uniform_plus_difference():
    ensemble = WishartIdentity(3)
    spec = PriorSpec(type="rescaled_stein")
    mu = np.array([0.5, 0.0, 0.0])
    stein = bayes_risk(spec, mu, ensemble, ensemble, 50, np.random.default_rng(11))
    uniform = bayes_risk(PriorSpec(type="uniform"), mu, ensemble, ensemble, 50, np.random.default_rng(11))
    difference = bayes_risk_difference(spec, mu, ensemble, ensemble, 50, np.random.default_rng(11))
    assert stein.mean - uniform.mean == pytest.approx(difference.mean, abs=1e-10)


def test_rescaled_stein_improves_under_wishart_ensemble():
    ensemble = WishartIdentity(5)
    estimate = bayes_risk_difference(PriorSpec(type="rescaled_stein"), np.zeros(5), ensemble, ensemble, 300,
                                     np.random.default_rng(12))
    assert estimate.upper() < 0
    assert estimate.quantity == "bayes_risk_difference"


def test_strong_ridge_wins_at_origin():
    train = DesignInduced(dim=5, n_samples=10)
    future = DesignInduced(dim=5, n_samples=10, role="future")
    ridge = PriorSpec(type="ridge", lam=10.0)
    near = bayes_risk(ridge, np.zeros(5), train, future, 200, np.random.default_rng(13))
    near_uniform = bayes_risk(PriorSpec(type="uniform"), np.zeros(5), train, future, 200, np.random.default_rng(13))
    assert near.mean < near_uniform.mean


def test_risk_difference_is_continuous_in_pseudo_inverse_ridge():
    rng = np.random.default_rng(22)
    basis, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    sigma_tilde = PsdMatrix.from_array(basis @ np.diag([1.5, 0.8, 0.0]) @ basis.T)
    sigma = random_spd(rng, 3)
    mu = rng.standard_normal(3)
    exact = risk_difference(SteinPrior(3), mu, sigma, sigma_tilde, 2000, np.random.default_rng(23))
    assert np.isfinite(exact.mean)
    for eps, tolerance in ((1e-4, 1e-3), (1e-6, 1e-5)):
        ridged = risk_difference(SteinPrior(3), mu, sigma, sigma_tilde, 2000, np.random.default_rng(23),
                                 pinv_ridge=eps)
        assert abs(ridged.mean - exact.mean) <= tolerance
        assert abs(ridged.mean - exact.mean) <= 3.0 * np.hypot(ridged.std_error, exact.std_error)
