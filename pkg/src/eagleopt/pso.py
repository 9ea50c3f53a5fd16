"""Global-best particle swarm baseline.

Canonical inertia-weight swarm: velocities blend the previous velocity with
pulls toward each particle's personal best and the swarm best, capped per
coordinate, and positions reflect off the box walls.  Personal/global bests
keep their stored noisy-mean estimates rather than being re-sampled, so the
incumbent value never drifts upward under noise.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .geometry import as_bounds, fold_into_bounds
from .objectives import NoisyObjective
from .result import OptimizationResult, TracePoint
from .rng import RngStream


@dataclass(frozen=True)
class PsoConfig:
    n: int = 20
    inertia: float = 0.7
    cognitive: float = 1.5
    social: float = 1.5
    v_max_frac: float = 0.2  # per-coordinate speed cap as a fraction of domain width
    n_samples: int = 3
    tolerance: float = 1e-5
    stall_iters: int = 20
    max_evals: int = 100_000

    def __post_init__(self):
        if self.n < 2:
            raise ConfigError(f"swarm must have n >= 2, got {self.n}")
        if not 0.0 <= self.inertia <= 1.0:
            raise ConfigError(f"inertia must lie in [0, 1], got {self.inertia}")
        if self.cognitive < 0 or self.social < 0:
            raise ConfigError("cognitive and social weights must be >= 0")
        if not self.v_max_frac > 0:
            raise ConfigError(f"v_max_frac must be > 0, got {self.v_max_frac}")
        if self.n_samples < 1:
            raise ConfigError(f"n_samples must be >= 1, got {self.n_samples}")
        if not self.tolerance >= 0:
            raise ConfigError(f"tolerance must be >= 0, got {self.tolerance}")
        if self.stall_iters < 1:
            raise ConfigError(f"stall_iters must be >= 1, got {self.stall_iters}")

    def validate_budget(self, needed: int):
        if self.max_evals < needed:
            raise ConfigError(
                f"max_evals {self.max_evals} cannot score the initial swarm ({needed})"
            )


def pso_optimize(obj: NoisyObjective, bounds, config: PsoConfig,
                 rng: RngStream) -> OptimizationResult:
    """Run the swarm until it stalls or hits the evaluation cap.

    Stall means the global best improved by less than `tolerance` over the
    last `stall_iters` iterations.
    """
    b = as_bounds(bounds, obj.problem.dim)
    n, d, ns = config.n, b.shape[0], config.n_samples
    config.validate_budget(n * ns)
    lo, hi = b[:, 0], b[:, 1]
    v_max = config.v_max_frac * (hi - lo)

    X = lo + (hi - lo) * rng.gen.random((n, d))
    V = np.zeros((n, d))
    means, errs = obj.estimate_mean_batch(X, rng, ns)
    spent = n * ns

    pbest_x = X.copy()
    pbest_val = means.copy()
    pbest_err = errs.copy()
    g = int(np.argmin(pbest_val))
    gbest_x = pbest_x[g].copy()
    gbest_val = float(pbest_val[g])
    gbest_std = float(pbest_err[g] * np.sqrt(ns))

    trace = [TracePoint(0, gbest_val, gbest_std, spent, "init")]
    history = [gbest_val]
    iteration = 0

    while spent + n * ns <= config.max_evals:
        iteration += 1
        r1 = rng.gen.random((n, d))
        r2 = rng.gen.random((n, d))
        V = (config.inertia * V
             + config.cognitive * r1 * (pbest_x - X)
             + config.social * r2 * (gbest_x - X))
        np.clip(V, -v_max, v_max, out=V)
        X = fold_into_bounds(X + V, b)

        means, errs = obj.estimate_mean_batch(X, rng, ns)
        spent += n * ns

        improved = means < pbest_val
        pbest_x[improved] = X[improved]
        pbest_val[improved] = means[improved]
        pbest_err[improved] = errs[improved]

        g = int(np.argmin(pbest_val))
        if pbest_val[g] < gbest_val:
            gbest_x = pbest_x[g].copy()
            gbest_val = float(pbest_val[g])
            gbest_std = float(pbest_err[g] * np.sqrt(ns))
            trace.append(TracePoint(iteration, gbest_val, gbest_std, spent, "iter"))

        history.append(gbest_val)
        if iteration >= config.stall_iters:
            if history[iteration - config.stall_iters] - gbest_val < config.tolerance:
                break

    if not trace or trace[-1].evaluations != spent:
        trace.append(TracePoint(iteration, gbest_val, gbest_std, spent, "final"))
    return OptimizationResult(gbest_x, gbest_val, gbest_std, spent, iteration, trace)
