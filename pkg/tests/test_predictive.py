import numpy as np
import pytest

from src.gaussian_core import PsdMatrix, SpdMatrix, gaussian_logpdf
from src.predictive import (
    LinearGaussianPredictive,
    PredictiveDensity,
    direct_predictive_logpdf_mc,
    normalization_check,
    plugin_logpdf,
    predictive_logpdf,
    predictive_sample,
)
from src.priors import GaussianRidgePrior, RadialPrior, SteinPrior, UniformPrior
from src.utils.errors import DimensionMismatchError, SamplerError


def random_spd(rng, dim):
    a = rng.standard_normal((dim, dim))
    return SpdMatrix.from_array(a @ a.T / dim + 0.5 * np.eye(dim))


def test_uniform_predictive_is_gaussian():
    rng = np.random.default_rng(0)
    sigma, sigma_tilde = random_spd(rng, 3), random_spd(rng, 3)
    y = rng.standard_normal(3)
    points = rng.standard_normal((5, 3))
    density = PredictiveDensity(UniformPrior(3), y, sigma, sigma_tilde)
    expected = LinearGaussianPredictive.uniform(sigma, sigma_tilde).logpdf(points, y)
    assert np.allclose(predictive_logpdf(density, points), expected)


def test_ridge_predictive_matches_conjugate_form():
    rng = np.random.default_rng(1)
    sigma, sigma_tilde = random_spd(rng, 4), random_spd(rng, 4)
    y = rng.standard_normal(4)
    points = y + rng.standard_normal((10, 4))
    density = PredictiveDensity(GaussianRidgePrior(4, 0.7), y, sigma, sigma_tilde)
    conjugate = LinearGaussianPredictive.ridge(sigma, sigma_tilde, 0.7)
    assert np.allclose(density.logpdf(points), conjugate.logpdf(points, y), atol=1e-8)


def test_stein_predictive_is_normalised():
    density = PredictiveDensity(SteinPrior(3), np.array([0.5, -1.0, 0.2]), SpdMatrix.identity(3),
                                SpdMatrix.identity(3))
    check = normalization_check(density, 200_000, np.random.default_rng(2))
    assert check.mean == pytest.approx(1.0, abs=0.01)


def test_ratio_form_agrees_with_direct_integration():
    rng = np.random.default_rng(3)
    sigma, sigma_tilde = random_spd(rng, 3), random_spd(rng, 3)
    y = rng.standard_normal(3)
    y_tilde = y + rng.standard_normal(3)
    ratio = PredictiveDensity(SteinPrior(3), y, sigma, sigma_tilde).logpdf(y_tilde)
    direct = direct_predictive_logpdf_mc(SteinPrior(3), y, sigma, sigma_tilde, y_tilde, 400_000, rng)
    assert abs(ratio - direct.mean) <= 4.0 * direct.std_error


def test_sampler_mean_equals_posterior_mean():
    density = PredictiveDensity(SteinPrior(3), np.array([1.5, -0.5, 0.0]), SpdMatrix.identity(3),
                                SpdMatrix.identity(3))
    draws = predictive_sample(density, np.random.default_rng(4), 10_000)
    assert draws.samples.shape == (10_000, 3)
    assert 0.0 < draws.acceptance_rate <= 1.0
    se = np.std(draws.samples, axis=0, ddof=1) / np.sqrt(10_000)
    assert np.all(np.abs(draws.samples.mean(axis=0) - density.mean) <= 4.0 * se)


def test_uniform_sampler_accepts_everything():
    density = PredictiveDensity(UniformPrior(2), np.zeros(2), SpdMatrix.identity(2), SpdMatrix.identity(2))
    draws = density.sample(np.random.default_rng(5), 50_000)
    assert draws.acceptance_rate == 1.0
    assert np.allclose(np.cov(draws.samples, rowvar=False), 2.0 * np.eye(2), atol=0.05)


def test_sampler_needs_a_rejection_bound():
    radial = RadialPrior(3, g=lambda r: 1.0 + r)
    density = PredictiveDensity(radial, np.ones(3), SpdMatrix.identity(3), SpdMatrix.identity(3))
    with pytest.raises(SamplerError):
        density.sample(np.random.default_rng(6), 10)


def test_rank_deficient_future_uses_support_density():
    e1 = np.eye(3)[0]
    sigma_tilde = PsdMatrix.from_array(np.outer(e1, e1))
    density = PredictiveDensity(SteinPrior(3), np.array([1.0, 1.0, 1.0]), SpdMatrix.identity(3), sigma_tilde)
    # moving y_tilde off the support of Sigma_tilde leaves the support density unchanged
    a = density.support_logpdf(np.array([0.5, 0.0, 0.0]))
    b = density.support_logpdf(np.array([0.5, 3.0, -2.0]))
    assert a == pytest.approx(b)


def test_plugin_logpdf():
    cov = SpdMatrix.identity(3, 2.0)
    assert plugin_logpdf(np.ones(3), np.ones(3), cov) == pytest.approx(gaussian_logpdf(np.zeros(3), np.zeros(3), cov))


def test_dimension_checks():
    with pytest.raises(DimensionMismatchError):
        PredictiveDensity(SteinPrior(3), np.zeros(4), SpdMatrix.identity(3), SpdMatrix.identity(3))
    with pytest.raises(DimensionMismatchError):
        PredictiveDensity(SteinPrior(3), np.zeros((2, 3)), SpdMatrix.identity(3), SpdMatrix.identity(3))


def test_linear_gaussian_ridge_shrinks_mean():
    predictive = LinearGaussianPredictive.ridge(SpdMatrix.identity(2), SpdMatrix.identity(2), 1.0)
    assert np.allclose(predictive.mean(np.array([2.0, -4.0])), [1.0, -2.0])
    assert np.allclose(predictive.cov.entries, 1.5 * np.eye(2))
    with pytest.raises(ValueError):
        LinearGaussianPredictive.ridge(SpdMatrix.identity(2), SpdMatrix.identity(2), 0.0)


def test_joint_translation_equivariance_with_centred_prior():
    shift = np.array([1.0, -2.0, 0.5])
    profile = lambda r: 1.0 / (1.0 + r**2) ** 2
    centred = RadialPrior(3, g=profile, nonincreasing=True)
    shifted = RadialPrior(3, g=profile, center=shift, nonincreasing=True)
    y, y_tilde = np.array([0.3, 0.1, -0.4]), np.array([1.0, 0.0, 0.2])
    sigma, sigma_tilde = SpdMatrix.identity(3), SpdMatrix.identity(3, 2.0)
    a = PredictiveDensity(centred, y, sigma, sigma_tilde).logpdf(y_tilde)
    b = PredictiveDensity(shifted, y + shift, sigma, sigma_tilde).logpdf(y_tilde + shift)
    assert a == pytest.approx(b, abs=1e-9)


def test_uniform_predictive_is_translation_invariant():
    density = PredictiveDensity(UniformPrior(3), np.zeros(3), SpdMatrix.identity(3), SpdMatrix.identity(3))
    moved = PredictiveDensity(UniformPrior(3), np.ones(3), SpdMatrix.identity(3), SpdMatrix.identity(3))
    assert density.logpdf(np.array([0.5, 0.0, 1.0])) == pytest.approx(moved.logpdf(np.array([1.5, 1.0, 2.0])))
