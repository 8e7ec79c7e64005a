import numpy as np
import pytest

from src.gaussian_core import (
    PsdMatrix,
    SpdMatrix,
    combine,
    combine_covariance,
    gaussian_kl,
    gaussian_logpdf,
    heat_identity_check,
    semidefinite_normal_sample,
    uniform_predictive_logpdf,
)
from src.utils.errors import (
    DimensionMismatchError,
    InfiniteDivergenceError,
    InvalidInputError,
    NotPositiveDefiniteError,
    RankDeficiencyError,
    ShrinkageLabError,
)


def random_spd(rng, dim):
    a = rng.standard_normal((dim, dim))
    return SpdMatrix.from_array(a @ a.T / dim + 0.5 * np.eye(dim))


def test_spd_factorization():
    rng = np.random.default_rng(0)
    s = random_spd(rng, 4)
    assert np.allclose(s.sqrt @ s.sqrt, s.entries)
    assert np.allclose(s.inverse @ s.entries, np.eye(4))
    assert np.isclose(s.log_det, np.linalg.slogdet(s.entries)[1])
    assert np.all(np.diff(s.eigenvalues) <= 0)


def test_spd_rejects_indefinite_and_asymmetric():
    with pytest.raises(NotPositiveDefiniteError):
        SpdMatrix.from_array(np.diag([1.0, -1.0, 2.0]))
    with pytest.raises(InvalidInputError):
        SpdMatrix.from_array([[1.0, 0.5], [0.0, 1.0]])
    with pytest.raises(InvalidInputError):
        SpdMatrix.from_array([[1.0, np.nan], [np.nan, 1.0]])
    assert issubclass(InvalidInputError, ShrinkageLabError)
    with pytest.raises(DimensionMismatchError):
        SpdMatrix.from_array(np.ones((2, 3)))


def test_psd_rank_and_pseudo_inverse():
    e1 = np.eye(3)[0]
    p = PsdMatrix.from_array(2.0 * np.outer(e1, e1))
    assert p.rank == 1
    assert not p.is_full_rank
    assert np.allclose(p.pseudo_inverse, 0.5 * np.outer(e1, e1))
    assert p.null_basis.shape == (3, 2)
    with pytest.raises(RankDeficiencyError):
        PsdMatrix.from_array(np.zeros((3, 3)))


def test_combine_equal_covariances_averages():
    identity = SpdMatrix.identity(3)
    y, y_tilde = np.array([1.0, 2.0, 3.0]), np.array([3.0, 2.0, 1.0])
    stat = combine(identity, identity, y, y_tilde)
    assert np.allclose(stat.w, [2.0, 2.0, 2.0])
    assert np.allclose(stat.sigma_w.entries, 0.5 * np.eye(3))


def test_combine_rank_deficient_future():
    e1 = np.eye(3)[0]
    sigma_tilde = PsdMatrix.from_array(np.outer(e1, e1))
    stat = combine(SpdMatrix.identity(3), sigma_tilde, np.zeros(3), np.array([2.0, 5.0, 5.0]))
    # only the first coordinate of y_tilde is seen
    assert np.allclose(stat.w, [1.0, 0.0, 0.0])
    assert np.allclose(np.diag(stat.sigma_w.entries), [0.5, 1.0, 1.0])


def test_gaussian_logpdf_matches_standard_normal():
    value = gaussian_logpdf(np.zeros(2), np.zeros(2), SpdMatrix.identity(2))
    assert np.isclose(value, -np.log(2.0 * np.pi))


def test_degenerate_logpdf_off_support_is_minus_infinity():
    e1 = np.eye(2)[0]
    cov = PsdMatrix.from_array(np.outer(e1, e1))
    assert np.isclose(gaussian_logpdf(np.array([0.0, 0.0]), np.zeros(2), cov), -0.5 * np.log(2.0 * np.pi))
    assert gaussian_logpdf(np.array([0.0, 1.0]), np.zeros(2), cov) == -np.inf


def test_uniform_predictive_is_sum_of_covariances():
    rng = np.random.default_rng(1)
    sigma, sigma_tilde = random_spd(rng, 3), random_spd(rng, 3)
    y, y_tilde = rng.standard_normal(3), rng.standard_normal(3)
    total = SpdMatrix.from_array(sigma.entries + sigma_tilde.entries)
    assert np.isclose(uniform_predictive_logpdf(y_tilde, y, sigma, sigma_tilde), gaussian_logpdf(y_tilde, y, total))


def test_kl_known_value():
    value = gaussian_kl(np.zeros(3), SpdMatrix.identity(3), np.zeros(3), SpdMatrix.identity(3, 2.0))
    assert abs(value - 0.2897) < 1e-4
    assert gaussian_kl(np.ones(3), SpdMatrix.identity(3), np.ones(3), SpdMatrix.identity(3)) == pytest.approx(0.0)


def test_kl_infinite_for_incompatible_supports():
    e1, e2 = np.eye(2)
    with pytest.raises(InfiniteDivergenceError):
        gaussian_kl(np.zeros(2), PsdMatrix.from_array(np.eye(2)), np.zeros(2), PsdMatrix.from_array(np.outer(e1, e1)))
    # a degenerate first argument only needs mass on its own support
    value = gaussian_kl(np.zeros(2), PsdMatrix.from_array(np.outer(e2, e2)), np.zeros(2), SpdMatrix.identity(2))
    assert value == pytest.approx(0.0)


def test_semidefinite_sample_stays_on_support():
    rng = np.random.default_rng(2)
    e1 = np.eye(3)[0]
    draws = semidefinite_normal_sample(np.ones(3), PsdMatrix.from_array(np.outer(e1, e1)), rng, size=1000)
    assert draws.shape == (1000, 3)
    assert np.allclose(draws[:, 1:], 1.0)
    assert abs(np.var(draws[:, 0]) - 1.0) < 0.15


def test_heat_identity():
    rng = np.random.default_rng(3)
    for _ in range(5):
        derivative, half_laplacian = heat_identity_check(rng.standard_normal(3), rng.standard_normal(3),
                                                         rng.uniform(0.5, 2.0, size=3), h=1e-4)
        assert derivative == pytest.approx(half_laplacian, rel=1e-4, abs=1e-7)


def test_training_covariance_dominates_combined():
    rng = np.random.default_rng(20)
    for trial in range(50):
        dim = 2 + trial % 4
        sigma = random_spd(rng, dim)
        if trial % 2:
            factor = rng.standard_normal((dim, dim - 1))
            sigma_tilde = PsdMatrix.from_array(factor @ factor.T)
        else:
            sigma_tilde = random_spd(rng, dim)
        gap = sigma.entries - combine_covariance(sigma, sigma_tilde).entries
        assert np.linalg.eigvalsh(0.5 * (gap + gap.T)).min() >= -1e-10


def test_combine_approaches_training_as_future_variance_grows():
    rng = np.random.default_rng(21)
    sigma = random_spd(rng, 3)
    y, y_tilde = rng.standard_normal(3), rng.standard_normal(3)
    scale = np.linalg.norm(sigma.entries, 2)
    errors = []
    for eps in (1e-3, 1e-6):
        stat = combine(sigma, SpdMatrix.identity(3, 1.0 / eps), y, y_tilde)
        cov_error = np.abs(stat.sigma_w.entries - sigma.entries).max()
        mean_error = np.abs(stat.w - y).max()
        assert cov_error <= 10.0 * eps * scale**2
        assert mean_error <= 10.0 * eps * scale * (1.0 + scale) * (np.abs(y).max() + np.abs(y_tilde).max())
        errors.append(cov_error)
    assert errors[1] < errors[0]
