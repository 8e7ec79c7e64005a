import numpy as np
import pytest

from src.gaussian_core import SpdMatrix
from src.priors import (
    GaussianRidgePrior,
    PriorSpec,
    RadialPrior,
    RescaledSteinPrior,
    SteinPrior,
    UniformPrior,
    build_astar,
    rescaled_stein_identity_check,
    resolve_prior,
    superharmonicity_check,
)
from src.utils.errors import ConfigError, DimensionMismatchError, NotLoewnerOrderedError, PriorPoleError


def random_spd(rng, dim):
    a = rng.standard_normal((dim, dim))
    return SpdMatrix.from_array(a @ a.T / dim + 0.5 * np.eye(dim))


def test_uniform_prior_is_flat():
    prior = UniformPrior(4)
    assert prior.log_density(np.ones(4)) == 0.0
    assert prior.log_density(np.ones((5, 4))).shape == (5,)


def test_stein_prior_density():
    prior = SteinPrior(5)
    assert prior.log_density(np.array([2.0, 0, 0, 0, 0])) == pytest.approx(-3.0 * np.log(2.0))
    with pytest.raises(PriorPoleError):
        prior.log_density(np.zeros(5))
    with pytest.raises(DimensionMismatchError):
        SteinPrior(2)


def test_rescaled_stein_with_identity_matches_stein():
    rng = np.random.default_rng(0)
    mu = rng.standard_normal((6, 4))
    rescaled = RescaledSteinPrior(SpdMatrix.identity(4))
    assert np.allclose(rescaled.log_density(mu), SteinPrior(4).log_density(mu))


def test_ridge_prior_is_normalised_gaussian():
    prior = GaussianRidgePrior(3, 2.0)
    expected = 1.5 * np.log(2.0 / (2.0 * np.pi)) - 0.5 * 2.0 * 1.0
    assert prior.log_density(np.array([1.0, 0.0, 0.0])) == pytest.approx(expected)
    with pytest.raises(ValueError):
        GaussianRidgePrior(3, 0.0)


def test_radial_prior_profile():
    prior = RadialPrior(3, g=lambda r: 1.0 / (1.0 + r**2), nonincreasing=True)
    assert prior.log_density(np.array([1.0, 0.0, 0.0])) == pytest.approx(-np.log(2.0))
    assert prior.supports_rejection_sampling
    assert prior.is_rotation_invariant


def test_stein_is_harmonic_in_three_dimensions():
    rng = np.random.default_rng(1)
    points = rng.standard_normal((8, 3))
    points /= np.linalg.norm(points, axis=1, keepdims=True)
    report = superharmonicity_check(SteinPrior(3), points, 1e-3)
    assert np.max(np.abs(report.laplacians)) <= 1e-4


def test_ridge_prior_laplacian_negative_at_origin():
    report = superharmonicity_check(GaussianRidgePrior(5, 1.0), [np.zeros(5)], 1e-3)
    assert report.max_value < 0


def test_superharmonicity_check_rejects_points_near_pole():
    with pytest.raises(ValueError):
        superharmonicity_check(SteinPrior(3), [[1e-3, 0.0, 0.0]], 1e-3)


def test_astar_factorizes_difference():
    rng = np.random.default_rng(3)
    for _ in range(20):
        sigma_1 = random_spd(rng, 4)
        b = rng.standard_normal((4, 4))
        astar = build_astar(sigma_1, SpdMatrix.from_array(sigma_1.entries + b @ b.T))
        assert np.allclose(astar.matrix @ astar.matrix.T, b @ b.T, atol=1e-10)
        assert astar.rank == 4
        assert not astar.rank_warning


def test_astar_low_rank_difference():
    sigma_1 = SpdMatrix.identity(3)
    e1 = np.eye(3)[0]
    astar = build_astar(sigma_1, SpdMatrix.from_array(np.eye(3) + np.outer(e1, e1)))
    assert astar.rank == 1
    assert astar.rank_warning
    assert np.allclose(astar.matrix @ astar.matrix.T, np.outer(e1, e1), atol=1e-10)


def test_astar_requires_loewner_order():
    with pytest.raises(NotLoewnerOrderedError):
        build_astar(SpdMatrix.identity(3, 2.0), SpdMatrix.identity(3))


def test_rescaled_stein_identity():
    rng = np.random.default_rng(4)
    for _ in range(20):
        sigma_1 = random_spd(rng, 4)
        sigma_2 = SpdMatrix.from_array(sigma_1.entries + random_spd(rng, 4).entries)
        lhs, rhs = rescaled_stein_identity_check(sigma_1, sigma_2, rng.standard_normal(4))
        assert lhs == pytest.approx(rhs, abs=1e-9)


def test_prior_spec_names_and_aliases():
    spec = PriorSpec.model_validate({"type": "ridge", "lambda": 10})
    assert spec.lam == 10
    assert spec.name == "ridge(10)"
    assert PriorSpec(type="rescaled_stein").name == "rescaled_stein[train_cov]"
    assert PriorSpec(type="plugin").is_plugin
    with pytest.raises(ValueError):
        PriorSpec(type="ridge")


def test_resolve_prior():
    rng = np.random.default_rng(5)
    sigma = random_spd(rng, 3)
    design = rng.standard_normal((3, 8))
    assert isinstance(resolve_prior(PriorSpec(type="stein"), 3), SteinPrior)
    ridge = resolve_prior(PriorSpec(type="ridge", lam=10.0), 3, noise_variance=2.0)
    assert ridge.lam == pytest.approx(5.0)
    train = resolve_prior(PriorSpec(type="rescaled_stein"), 3, train_cov=sigma)
    assert np.allclose(train.sigma_star.entries, sigma.entries)
    caption = resolve_prior(PriorSpec(type="rescaled_stein", sigma_star="caption"), 3, design=design)
    assert np.allclose(caption.sigma_star.entries, design @ design.T)
    with pytest.raises(ConfigError):
        resolve_prior(PriorSpec(type="plugin"), 3)
    with pytest.raises(ConfigError):
        resolve_prior(PriorSpec(type="rescaled_stein"), 3)
