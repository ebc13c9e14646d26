"""Pinching-antenna NOMA downlink: channel model, SIC rates, and discrete
activation optimization by one-sided matching."""

from .activation import (BudgetExceededError, Matching, Move, Trajectory,
                         candidate_count, check_stability,
                         conventional_baseline, conventional_positions,
                         distance_based_activation, exhaustive_search,
                         matching_activation, random_matching)
from .channel import (ActiveSet, EffectiveChannel, antenna_power,
                      effective_channel, free_space_coeff, waveguide_phase)
from .harness import (ConfigError, ExperimentSpec, ResultRow, SweepSpec,
                      TraceRow, build_spec, convergence_trace,
                      parse_config_file, read_results, run_experiment,
                      write_results, write_trace)
from .kernels import BACKEND, SetEvaluator, amplitude_matrix, implementations
from .noma import (PowerAllocation, RateReport, jain_fairness, rate_report,
                   sic_order, sum_rate, user_rates)
from .scenario import (Deployment, Point3, SystemConfig, build_positions,
                       dbm_to_watts, derived_rf, feed_point, make_deployment,
                       sample_users, stream_rng, watts_to_dbm)

__version__ = "0.1.0"

__all__ = [
    "ActiveSet", "BACKEND", "BudgetExceededError", "ConfigError",
    "Deployment", "EffectiveChannel", "ExperimentSpec", "Matching", "Move",
    "Point3", "PowerAllocation", "RateReport", "ResultRow", "SetEvaluator",
    "SweepSpec", "SystemConfig", "TraceRow", "Trajectory",
    "amplitude_matrix", "antenna_power", "build_positions", "build_spec",
    "candidate_count", "check_stability", "conventional_baseline",
    "conventional_positions", "convergence_trace", "dbm_to_watts",
    "derived_rf", "distance_based_activation", "effective_channel",
    "exhaustive_search", "feed_point", "free_space_coeff", "implementations",
    "jain_fairness", "make_deployment", "matching_activation",
    "parse_config_file", "random_matching", "rate_report", "read_results",
    "run_experiment", "sample_users", "sic_order", "stream_rng", "sum_rate",
    "user_rates", "waveguide_phase", "watts_to_dbm", "write_results",
    "write_trace",
]
