"""
Command-line entry point for shrinkage-lab

    python cli/main.py <experiment> [--config PATH] [--seed U64] [--out DIR]
                       [--paper-scale] [--workers N] [--intercept]

Exit codes: 0 success, 1 configuration error, 2 self-test failure, 3 I/O error.
"""

import logging
import sys
from pathlib import Path
from typing import Optional

# Add the project root to the Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import click
from dotenv import load_dotenv
from pydantic import ValidationError

# Load environment variables (SHRINKAGE_LAB_WORKERS, SHRINKAGE_LAB_CONFIG)
load_dotenv()

from src.cli_harness import load_experiment_config, run, write_results
from src.utils.errors import ConfigError
from src.utils.settings import get_settings, load_settings

logger = logging.getLogger("shrinkage_lab")

EXIT_CONFIG = 1
EXIT_SELFTEST = 2
EXIT_IO = 3

EXPERIMENTS = {
    "fit-lines": "Fitted slope, intercept and regression lines under each prior.",
    "predictive-cdf": "Predictive samples, means and quantiles of a future target.",
    "risk-curve": "KL-risk improvement over the uniform prior against ||beta||, per dimension.",
    "compare-densities": "Bayes KL risk of several predictive densities against ||beta||.",
    "astar-surface": "Stein-prior predictions under the A* prior over a grid of query points.",
    "selftest": "Run the oracle suite and exit nonzero on any failure.",
}


def _default_config(tag: str) -> Path:
    return project_root / "config" / "experiments" / f"{tag}.json"


def _execute(tag: str, config_path: Optional[str], seed: Optional[int], out: Optional[str], paper_scale: bool,
             workers: int, intercept: Optional[bool], settings_path: Optional[str]) -> int:
    try:
        config = load_experiment_config(config_path or _default_config(tag))
        if config.experiment != tag:
            raise ConfigError(f"Config describes '{config.experiment}', not '{tag}'")
        config = config.with_overrides(seed=seed, output=out, intercept=intercept)
        settings = load_settings(settings_path) if settings_path else get_settings()
    except (ConfigError, ValidationError) as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except OSError as e:
        logger.error(f"Cannot read configuration: {e}")
        return EXIT_IO

    try:
        result = run(config, workers=workers, paper_scale=paper_scale, settings=settings)
    except OSError as e:
        logger.error(f"Cannot read experiment input: {e}")
        return EXIT_IO

    try:
        csv_path, meta_path = write_results(result.rows, Path(config.output), tag, result.metadata)
    except OSError as e:
        logger.error(f"Cannot write results: {e}")
        return EXIT_IO

    click.echo(f"{tag}: {len(result.rows)} rows, {len(result.failed)} failed")
    click.echo(f"  results:  {csv_path}")
    click.echo(f"  metadata: {meta_path}")

    if tag == "selftest":
        for row in result.rows:
            status = "FAIL" if row.error else "ok"
            click.echo(f"  [{status:>4}] {row.density:<34} {row.estimate:.6g}  {row.error}")
        if result.failed:
            return EXIT_SELFTEST
    elif result.failed:
        logger.warning(f"{len(result.failed)} sweep points failed; see the error column of {csv_path}")
    return 0


def _make_command(tag: str, help_text: str) -> click.Command:
    @click.command(name=tag, help=help_text)
    @click.option("--config", "config_path", type=str, default=None,
                  help=f"Experiment config JSON (default: config/experiments/{tag}.json)")
    @click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None, help="Master seed")
    @click.option("--out", type=str, default=None, help="Output directory")
    @click.option("--paper-scale", is_flag=True, default=False, help="Use the full replication count")
    @click.option("--workers", type=click.IntRange(min=1), default=1, envvar="SHRINKAGE_LAB_WORKERS",
                  show_envvar=True, help="Parallel workers; results do not depend on this")
    @click.option("--intercept/--no-intercept", default=None, help="Append an intercept coordinate")
    @click.option("--settings", "settings_path", type=str, default=None, help="Numerical settings YAML")
    def command(config_path, seed, out, paper_scale, workers, intercept, settings_path):
        sys.exit(_execute(tag, config_path, seed, out, paper_scale, workers, intercept, settings_path))

    return command


@click.group(name="shrinkage-lab")
@click.option("-v", "--verbose", is_flag=True, default=False, help="Debug logging")
def cli(verbose: bool):
    """Bayesian shrinkage predictive densities under changing covariances."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


for _tag, _help in EXPERIMENTS.items():
    cli.add_command(_make_command(_tag, _help))


if __name__ == "__main__":
    cli()
