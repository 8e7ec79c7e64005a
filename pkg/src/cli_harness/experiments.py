"""
Experiment runner for shrinkage-lab

Each experiment expands into sweep points. A point draws from its own random
substream, so the rows do not depend on the worker count; points are executed
with joblib and assembled in task order. A point that raises a library error
becomes an error row and the sweep continues.
"""

import logging
import platform
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import scipy
from joblib import Parallel, delayed
from tqdm import tqdm

import src
from src.marginals import posterior_mean
from src.priors import PriorSpec, resolve_prior
from src.regression import (
    FutureDesign,
    RegressionData,
    RegressionPredictive,
    astar_regression_prior,
    draw_design,
    load_future_csv,
    load_regression_csv,
    reduce,
    three_point_data,
    with_intercept,
)
from src.risk import DesignInduced, bayes_risk, bayes_risk_difference
from src.utils.errors import DimensionMismatchError, ShrinkageLabError
from src.utils.settings import NumericalSettings, get_settings
from .experiment_config import ExperimentConfig
from .results import ResultRow
from .seeding import seed_substream
from .selftest import SELFTEST_CHECKS, run_check

logger = logging.getLogger(__name__)

EXPERIMENT_INDEX = {
    "fit-lines": 0,
    "predictive-cdf": 1,
    "risk-curve": 2,
    "compare-densities": 3,
    "astar-surface": 4,
    "selftest": 5,
}


@dataclass(frozen=True)
class SweepPoint:
    """Coordinates of one unit of work."""

    d: int
    beta_norm: float
    path: Tuple[int, ...]
    x1: Optional[float] = None
    x2: Optional[float] = None
    check: Optional[str] = None


@dataclass
class ExperimentRun:
    rows: List[ResultRow]
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def failed(self) -> List[ResultRow]:
        return [row for row in self.rows if row.error]


def _true_beta(config: ExperimentConfig, d: int, beta_norm: float) -> np.ndarray:
    if config.beta is not None:
        return np.asarray(config.beta, dtype=float)
    beta = np.zeros(d)
    beta[0] = beta_norm
    return beta


def _simulate_training(config: ExperimentConfig, d: int, beta_norm: float,
                       rng: np.random.Generator) -> Tuple[RegressionData, np.ndarray]:
    design = draw_design(rng, d, config.p, config.design_distribution)
    beta = _true_beta(config, d, beta_norm)
    if config.intercept:
        design = with_intercept(design)
        beta = np.append(beta, config.intercept_value)
    targets = design.T @ beta + np.sqrt(config.noise_variance) * rng.standard_normal(config.p)
    return RegressionData(design=design, targets=targets, noise_variance=config.noise_variance), beta


def _point_estimate(spec: PriorSpec, data: RegressionData, settings: NumericalSettings) -> np.ndarray:
    y1, sigma = reduce(data, settings)
    if spec.is_plugin:
        return y1
    prior = resolve_prior(spec, data.dim, train_cov=sigma, design=data.design, noise_variance=data.noise_variance)
    return posterior_mean(prior, y1, sigma, settings)


def _fit_lines_point(config: ExperimentConfig, point: SweepPoint, settings: NumericalSettings) -> List[ResultRow]:
    rng = seed_substream(config.seed, point.path)
    data, _ = _simulate_training(config, point.d, point.beta_norm, rng)
    y1, _ = reduce(data, settings)
    replicate = float(point.path[-1])
    rows = []
    for spec in config.densities:
        estimate = _point_estimate(spec, data, settings)
        common = dict(tag="fit-lines", d=data.dim, beta_norm=point.beta_norm, se=0.0, n=1, seed=config.seed)
        rows.append(ResultRow(density=f"{spec.name}:slope", estimate=float(estimate[0]), x2=replicate, **common))
        if config.intercept:
            rows.append(ResultRow(density=f"{spec.name}:intercept", estimate=float(estimate[-1]),
                                  x2=replicate, **common))
        if spec.type not in ("uniform", "plugin"):
            factor = float(np.linalg.norm(estimate) / np.linalg.norm(y1))
            rows.append(ResultRow(density=f"shrinkage_factor:{spec.name}", estimate=factor, x2=replicate, **common))
        for x in config.x_grid:
            x_tilde = np.zeros(data.dim)
            x_tilde[0] = x
            if config.intercept:
                x_tilde[-1] = 1.0
            rows.append(ResultRow(density=f"{spec.name}:line", estimate=float(x_tilde @ estimate),
                                  x1=float(x), x2=replicate, **common))
    return rows


def _csv_future(config: ExperimentConfig, dim: int) -> FutureDesign:
    future = load_future_csv(config.future_csv, config.future_noise_variance)
    if config.intercept and future.dim == dim - 1:
        future = FutureDesign(design=with_intercept(future.design), noise_variance=future.noise_variance)
    if future.dim != dim:
        raise DimensionMismatchError(f"{config.future_csv} has {future.dim} columns, expected d = {dim}")
    return future


def _future_design(config: ExperimentConfig, dim: int) -> FutureDesign:
    """Future design from future_csv, or the single query point future_x (e_1 by default)."""
    if config.future_csv:
        return _csv_future(config, dim)
    x_tilde = np.zeros(dim)
    if config.future_x is not None:
        x_tilde[:len(config.future_x)] = config.future_x
    else:
        x_tilde[0] = 1.0
    if config.intercept and (config.future_x is None or len(config.future_x) < dim):
        x_tilde[-1] = 1.0
    return FutureDesign(design=x_tilde, noise_variance=config.future_noise_variance)


def _predictive_cdf_point(config: ExperimentConfig, point: SweepPoint, settings: NumericalSettings,
                          n_draws: int) -> List[ResultRow]:
    rng = seed_substream(config.seed, point.path)
    data, _ = _simulate_training(config, point.d, point.beta_norm, rng)
    future = _future_design(config, data.dim)
    y1, sigma = reduce(data, settings)
    n_targets = future.design.shape[1]
    common = dict(tag="predictive-cdf", d=data.dim, beta_norm=point.beta_norm, seed=config.seed,
                  x2=float(point.path[-1]))
    rows = []
    for spec in config.densities:
        draw_rng = seed_substream(config.seed, point.path + (1,))
        if spec.is_plugin:
            exact_means = future.design.T @ y1
            samples = exact_means + np.sqrt(future.noise_variance) * draw_rng.standard_normal((n_draws, n_targets))
            acceptance, proposals = 1.0, n_draws
        else:
            prior = resolve_prior(spec, data.dim, train_cov=sigma, design=data.design,
                                  noise_variance=data.noise_variance)
            predictive = RegressionPredictive(data, future, prior, settings)
            draws = predictive.sample(draw_rng, n_draws)
            samples, exact_means = draws.samples, predictive.mean()
            acceptance, proposals = draws.acceptance_rate, draws.proposals
        rows.append(ResultRow(density=f"{spec.name}:acceptance", estimate=acceptance, se=0.0, n=proposals,
                              **common))
        for j in range(n_targets):
            # one future target keeps the plain density name
            name = spec.name if n_targets == 1 else f"{spec.name}[{j}]"
            column = samples[:, j]
            rows.append(ResultRow(density=f"{name}:sample_mean", estimate=float(np.mean(column)),
                                  se=float(np.std(column, ddof=1) / np.sqrt(n_draws)), n=n_draws, **common))
            rows.append(ResultRow(density=f"{name}:mean", estimate=float(exact_means[j]), se=0.0, n=1, **common))
            for level, value in zip(config.cdf_levels, np.quantile(column, config.cdf_levels)):
                rows.append(ResultRow(density=f"{name}:quantile", estimate=float(value), se=0.0, n=n_draws,
                                      x1=float(level), **common))
    return rows


def _ensembles(config: ExperimentConfig, d: int) -> Tuple[DesignInduced, DesignInduced]:
    train = DesignInduced(dim=d, n_samples=config.p, noise_variance=config.noise_variance,
                          role="train", distribution=config.design_distribution)
    future = DesignInduced(dim=d, n_samples=config.p_tilde, noise_variance=config.future_noise_variance,
                           role="future", distribution=config.design_distribution)
    return train, future


def _risk_curve_point(config: ExperimentConfig, point: SweepPoint, settings: NumericalSettings,
                      reps: int) -> List[ResultRow]:
    train, future = _ensembles(config, point.d)
    beta = _true_beta(config, point.d, point.beta_norm)
    rows = []
    for spec in config.densities:
        if spec.type == "uniform":
            continue
        if spec.is_plugin:
            uniform = bayes_risk(PriorSpec(type="uniform"), beta, train, future, reps,
                                 seed_substream(config.seed, point.path), settings)
            plugin = bayes_risk(spec, beta, train, future, reps, seed_substream(config.seed, point.path), settings)
            mean, se = uniform.mean - plugin.mean, float(np.hypot(uniform.std_error, plugin.std_error))
        else:
            estimate = bayes_risk_difference(spec, beta, train, future, reps,
                                             seed_substream(config.seed, point.path), settings)
            mean, se = -estimate.mean, estimate.std_error
        rows.append(ResultRow(tag="risk-curve", d=point.d, beta_norm=point.beta_norm,
                              density=f"improvement:{spec.name}", estimate=mean, se=se, n=reps, seed=config.seed))
    return rows


def _compare_densities_point(config: ExperimentConfig, point: SweepPoint, settings: NumericalSettings,
                             reps: int) -> List[ResultRow]:
    train, future = _ensembles(config, point.d)
    beta = _true_beta(config, point.d, point.beta_norm)
    rows = []
    for spec in config.densities:
        estimate = bayes_risk(spec, beta, train, future, reps, seed_substream(config.seed, point.path), settings)
        rows.append(ResultRow(tag="compare-densities", d=point.d, beta_norm=point.beta_norm, density=spec.name,
                              estimate=estimate.mean, se=estimate.std_error, n=estimate.n, seed=config.seed))
    return rows


def _training_data(config: ExperimentConfig) -> RegressionData:
    if config.training_csv:
        return load_regression_csv(config.training_csv, config.noise_variance)
    return three_point_data(config.noise_variance)


def _astar_surface_point(config: ExperimentConfig, point: SweepPoint, settings: NumericalSettings) -> List[ResultRow]:
    data = _training_data(config)
    x_tilde = np.zeros(data.dim)
    x_tilde[:2] = (point.x1, point.x2)
    others = _csv_future(config, data.dim).design if config.future_csv else data.design
    future = FutureDesign(design=np.column_stack([x_tilde, others]), noise_variance=config.future_noise_variance)
    astar = astar_regression_prior(data, future, settings)
    y1, sigma = reduce(data, settings)
    shrunk = float(x_tilde @ posterior_mean(astar.prior, y1, sigma, settings))
    mle = float(x_tilde @ y1)
    common = dict(tag="astar-surface", d=data.dim, beta_norm=float(np.linalg.norm(y1)), se=0.0, n=1,
                  seed=config.seed, x1=point.x1, x2=point.x2)
    return [
        ResultRow(density="astar_stein", estimate=shrunk, **common),
        ResultRow(density="mle", estimate=mle, **common),
        ResultRow(density="shrinkage", estimate=mle - shrunk, **common),
        ResultRow(density="astar_rank", estimate=float(astar.astar.rank), **common),
    ]


def build_points(config: ExperimentConfig) -> List[SweepPoint]:
    """Sweep points of an experiment in output order."""
    index = EXPERIMENT_INDEX[config.experiment]
    points = []
    if config.experiment in ("fit-lines", "predictive-cdf"):
        for di, d in enumerate(config.dims):
            for bi, norm in enumerate(config.beta_norms):
                for r in range(config.replications):
                    points.append(SweepPoint(d=d, beta_norm=norm, path=(index, di, bi, r)))
    elif config.experiment in ("risk-curve", "compare-densities"):
        for di, d in enumerate(config.dims):
            for norm in config.beta_norms:
                points.append(SweepPoint(d=d, beta_norm=norm, path=(index, di)))
    elif config.experiment == "astar-surface":
        for x1 in config.x_grid:
            for x2 in config.x2_grid:
                points.append(SweepPoint(d=0, beta_norm=0.0, path=(index,), x1=float(x1), x2=float(x2)))
    else:
        for k, name in enumerate(SELFTEST_CHECKS):
            points.append(SweepPoint(d=0, beta_norm=0.0, path=(index, k), check=name))
    return points


def run_point(config: ExperimentConfig, point: SweepPoint, reps: int, mc_n: int,
              settings: NumericalSettings) -> List[ResultRow]:
    """Evaluate one sweep point, turning library errors into an error row."""
    tag = config.experiment
    try:
        if tag == "fit-lines":
            return _fit_lines_point(config, point, settings)
        if tag == "predictive-cdf":
            return _predictive_cdf_point(config, point, settings, mc_n)
        if tag == "risk-curve":
            return _risk_curve_point(config, point, settings, reps)
        if tag == "compare-densities":
            return _compare_densities_point(config, point, settings, reps)
        if tag == "astar-surface":
            return _astar_surface_point(config, point, settings)
        return [run_check(point.check, seed_substream(config.seed, point.path), config.seed, settings)]
    except (ShrinkageLabError, np.linalg.LinAlgError) as e:
        logger.error(f"{tag} point {point.path} failed: {e}")
        density = point.check or "*"
        return [ResultRow.failed(tag, point.d, point.beta_norm, density, config.seed, e, point.x1, point.x2)]


def open_question_defaults(config: ExperimentConfig) -> Dict[str, Any]:
    """Choices the run made where the underlying setup leaves room."""
    defaults: Dict[str, Any] = {
        "noise_variance": config.noise_variance,
        "future_noise_variance": config.future_noise_variance,
        "design_distribution": config.design_distribution,
        "sigma_star": sorted({spec.sigma_star if isinstance(spec.sigma_star, str) else "explicit"
                              for spec in config.priors if spec.type == "rescaled_stein"}),
        "ridge_lambda_scale": "prior precision = lambda / noise_variance",
    }
    if config.experiment == "astar-surface":
        defaults["future_design"] = (f"[x_tilde, {config.future_csv}]" if config.future_csv else
                                     "[x_tilde, X]: the query point plus a replicate of the training design")
        defaults["training_data"] = config.training_csv or "built-in three-point plane"
    if config.experiment in ("risk-curve", "compare-densities"):
        defaults["ensemble"] = "design-induced, i.i.d. entries"
    if config.experiment == "predictive-cdf":
        defaults["residual_factor_omitted"] = True
        defaults["future_design"] = config.future_csv or "single query point future_x"
    return defaults


def run(config: ExperimentConfig, workers: int = 1, paper_scale: bool = False,
        settings: Optional[NumericalSettings] = None) -> ExperimentRun:
    """Run every sweep point of an experiment.

    Args:
        config: Validated experiment config
        workers: joblib worker count; results do not depend on it
        paper_scale: Use the full replication count instead of the desk-scale default
        settings: Numerical settings

    Returns:
        ExperimentRun with rows in deterministic order and run metadata
    """
    settings = settings or get_settings()
    reps = settings.paper_outer_reps if paper_scale else (config.outer_reps or settings.desk_outer_reps)
    mc_n = config.mc_n or settings.desk_mc_n
    points = build_points(config)
    logger.info(f"Running {config.experiment}: {len(points)} points, {reps} outer reps, {workers} worker(s)")

    started = time.perf_counter()
    jobs = Parallel(n_jobs=workers, prefer="processes", return_as="generator")(
        delayed(run_point)(config, point, reps, mc_n, settings) for point in points
    )
    rows: List[ResultRow] = []
    for point_rows in tqdm(jobs, total=len(points), desc=config.experiment):
        rows.extend(point_rows)
    elapsed = time.perf_counter() - started

    metadata = {
        "library_version": src.__version__,
        "numpy_version": np.__version__,
        "scipy_version": scipy.__version__,
        "python_version": platform.python_version(),
        "experiment": config.experiment,
        "config": config.model_dump(mode="json", by_alias=True),
        "settings": settings.model_dump(),
        "outer_reps": reps,
        "mc_n": mc_n,
        "paper_scale": paper_scale,
        "workers": workers,
        "open_question_defaults": open_question_defaults(config),
        "failed_points": sum(1 for row in rows if row.error),
        "wall_time_seconds": elapsed,
        "finished_at": datetime.now(timezone.utc).isoformat(),
    }
    if config.experiment == "selftest":
        metadata["checks"] = list(SELFTEST_CHECKS)
    return ExperimentRun(rows=rows, metadata=metadata)
