"""Cooperative cellular + D2D packet repair with network coding."""

from .baselines import BASELINES, SCHEMES, run_baseline, run_scheme
from .batch import run_batch
from .bounds import (all_bounds, lb_lossless, lb_lossy, ub_batch_lossless, ub_batch_lossy,
                     ub_instant_lossless, ub_instant_lossy)
from .coding import CodingMode, Subspace
from .errors import (ConfigurationError, CoopNCError, InstanceShapeError, InvalidPlanError,
                     InvariantViolation, RunawayError, SizeError)
from .grouping import Groups, group_wants
from .harness import ExperimentConfig, PointStats, emit_csv, monte_carlo, subfile_run
from .instant import run_instant
from .model import LossModel, RunResult, Scenario, load_scenario, run_stage_one
from .oracle import optimal_completion_time
from .overhead import OverheadParams, overhead_fraction

__version__ = "0.1.0"
