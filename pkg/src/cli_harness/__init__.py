# CLI harness: experiment configs, seeding, sweep runner, result files and the self-test suite
from .experiment_config import ExperimentConfig, ExperimentTag, load_experiment_config
from .seeding import seed_substream
from .results import CSV_COLUMNS, ResultRow, rows_to_frame, write_results
from .selftest import SELFTEST_CHECKS, CheckOutcome, run_check
from .experiments import ExperimentRun, SweepPoint, build_points, run, run_point
