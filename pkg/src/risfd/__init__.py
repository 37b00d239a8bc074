"""RIS phase configuration for full-duplex MIMO interference cancellation."""

from .baselines import baseline_no_ris, baseline_null_steering, baseline_random_ris
from .channel import ChannelSet, FadingModel, Geometry, generate_channel_set, pathloss_db
from .estimators import CoordinateDescentSolver, NoRIS, NullSteering, RandomRIS, RFICSolver
from .exceptions import ConfigError, RankDeficientError, RegimeError, SingularSystemError
from .harness import ExperimentSpec, run_experiment, summarize
from .solver import (
    SolveOutcome,
    project_unit_modulus,
    solve_coordinate_descent,
    solve_determined,
    solve_overdetermined,
    solve_relaxed,
    solve_underdetermined,
)
from .sysmodel import RateBreakdown, RisConfig, ScenarioConfig, rate_breakdown

__version__ = "0.1.0"

__all__ = [
    "ChannelSet", "ConfigError", "CoordinateDescentSolver", "ExperimentSpec", "FadingModel",
    "Geometry", "NoRIS", "NullSteering", "RFICSolver", "RandomRIS", "RankDeficientError",
    "RateBreakdown", "RegimeError", "RisConfig", "ScenarioConfig", "SingularSystemError",
    "SolveOutcome", "baseline_no_ris", "baseline_null_steering", "baseline_random_ris",
    "generate_channel_set", "pathloss_db", "project_unit_modulus", "rate_breakdown",
    "run_experiment", "solve_coordinate_descent", "solve_determined", "solve_overdetermined",
    "solve_relaxed", "solve_underdetermined", "summarize",
]
