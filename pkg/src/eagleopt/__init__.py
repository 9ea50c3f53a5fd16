"""Derivative-free stochastic optimization: two-stage eagle search, firefly
and simplex local search, a particle-swarm baseline, noisy benchmark
functions, and a seeded experiment harness."""

from ._kernels import BACKEND
from .eagle import EsConfig, es_optimize
from .errors import ConfigError, DimensionMismatch, UnknownName
from .firefly import FaConfig, attractiveness, distance, fa_optimize, move_firefly
from .functions import (BenchmarkProblem, available_functions, make_problem,
                        registry_document)
from .geometry import SearchRegion, fold_into_bounds, fold_into_interval
from .harness import (ExperimentReport, SuccessCriteria, TrialRecord, emit_report,
                      parse_report_json, run_experiment, run_trial, success_check)
from .levy import LevyConfig, levy_walk_point, sample_levy_step, sample_levy_steps
from .nelder_mead import NmConfig, nelder_mead
from .objectives import NoiseModel, NoisyObjective, robust_score
from .pso import PsoConfig, pso_optimize
from .result import OptimizationResult, TracePoint
from .rng import RngStream, sample_gaussian, sample_uniform_in_bounds, unit_direction

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BenchmarkProblem",
    "ConfigError",
    "DimensionMismatch",
    "EsConfig",
    "ExperimentReport",
    "FaConfig",
    "LevyConfig",
    "NmConfig",
    "NoiseModel",
    "NoisyObjective",
    "OptimizationResult",
    "PsoConfig",
    "RngStream",
    "SearchRegion",
    "SuccessCriteria",
    "TracePoint",
    "TrialRecord",
    "UnknownName",
    "attractiveness",
    "available_functions",
    "distance",
    "emit_report",
    "es_optimize",
    "fa_optimize",
    "fold_into_bounds",
    "fold_into_interval",
    "levy_walk_point",
    "make_problem",
    "move_firefly",
    "nelder_mead",
    "parse_report_json",
    "pso_optimize",
    "registry_document",
    "robust_score",
    "run_experiment",
    "run_trial",
    "sample_gaussian",
    "sample_levy_step",
    "sample_levy_steps",
    "sample_uniform_in_bounds",
    "success_check",
    "unit_direction",
    "__version__",
]
