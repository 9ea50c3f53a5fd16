"""Simplex local search (Nelder-Mead) over a noisy objective.

Vertex values are noisy-mean estimates, so the search also works as the
exploitation stage of the two-stage optimizer.  With bounds given, every
candidate vertex is reflected back into the box before scoring.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .geometry import as_bounds, fold_into_bounds
from .objectives import NoisyObjective
from .result import OptimizationResult, TracePoint
from .rng import RngStream


@dataclass(frozen=True)
class NmConfig:
    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5
    tolerance: float = 1e-8
    max_evals: int = 10_000
    n_samples: int = 1

    def __post_init__(self):
        if not self.reflection > 0:
            raise ConfigError(f"reflection must be > 0, got {self.reflection}")
        if not self.expansion > 1:
            raise ConfigError(f"expansion must be > 1, got {self.expansion}")
        if not 0 < self.contraction < 1:
            raise ConfigError(f"contraction must lie in (0, 1), got {self.contraction}")
        if not 0 < self.shrink < 1:
            raise ConfigError(f"shrink must lie in (0, 1), got {self.shrink}")
        if not self.tolerance >= 0:
            raise ConfigError(f"tolerance must be >= 0, got {self.tolerance}")
        if self.n_samples < 1:
            raise ConfigError(f"n_samples must be >= 1, got {self.n_samples}")


def nelder_mead(obj: NoisyObjective, start, radius: float, config: NmConfig,
                rng: RngStream, bounds=None) -> OptimizationResult:
    """Minimize from `start` with an initial simplex of size `radius`.

    The initial simplex is `start` plus `radius / 2` along each axis.  The
    search stops when the spread of vertex values drops below `tolerance`
    or the next estimate would exceed `max_evals` single evaluations.
    Returns the best position ever scored.
    """
    start = np.asarray(start, dtype=float)
    d = start.shape[0]
    ns = config.n_samples
    if not radius > 0:
        raise ConfigError(f"radius must be > 0, got {radius}")
    if config.max_evals < (d + 1) * ns:
        raise ConfigError(
            f"max_evals {config.max_evals} cannot score the initial simplex "
            f"({d + 1} vertices x {ns} samples)"
        )
    b = None if bounds is None else as_bounds(bounds, d)

    def clip(x):
        return x if b is None else fold_into_bounds(x, b)

    spent = 0
    best = {"x": None, "mean": np.inf, "std": 0.0}

    def score(x):
        nonlocal spent
        m, se = obj.estimate_mean(x, rng, ns)
        spent += ns
        if m < best["mean"]:
            best.update(x=np.array(x), mean=float(m), std=float(se * np.sqrt(ns)))
        return m

    simplex = np.vstack([start] + [clip(start + 0.5 * radius * _axis(d, k)) for k in range(d)])
    values = np.array([score(v) for v in simplex])

    rho, chi, psi, sig = config.reflection, config.expansion, config.contraction, config.shrink
    trace = []
    iteration = 0

    def room_for(n_points):
        return spent + n_points * ns <= config.max_evals

    while True:
        order = np.argsort(values, kind="stable")
        simplex = simplex[order]
        values = values[order]
        trace.append(TracePoint(iteration, best["mean"], best["std"], spent, "iter"))
        if values[-1] - values[0] < config.tolerance or not room_for(1):
            break
        iteration += 1

        centroid = simplex[:-1].mean(axis=0)
        reflected = clip(centroid + rho * (centroid - simplex[-1]))
        fr = score(reflected)

        if fr < values[0]:
            if room_for(1):
                expanded = clip(centroid + chi * (reflected - centroid))
                fe = score(expanded)
                if fe < fr:
                    simplex[-1], values[-1] = expanded, fe
                else:
                    simplex[-1], values[-1] = reflected, fr
            else:
                simplex[-1], values[-1] = reflected, fr
        elif fr < values[-2]:
            simplex[-1], values[-1] = reflected, fr
        else:
            if not room_for(1):
                break
            if fr < values[-1]:
                contracted = clip(centroid + psi * (reflected - centroid))
                fc = score(contracted)
                accept = fc <= fr
            else:
                contracted = clip(centroid - psi * (centroid - simplex[-1]))
                fc = score(contracted)
                accept = fc < values[-1]
            if accept:
                simplex[-1], values[-1] = contracted, fc
            elif room_for(d):
                for k in range(1, d + 1):
                    simplex[k] = clip(simplex[0] + sig * (simplex[k] - simplex[0]))
                    values[k] = score(simplex[k])
            else:
                break

    return OptimizationResult(best["x"], best["mean"], best["std"], spent, iteration, trace)


def _axis(d: int, k: int) -> np.ndarray:
    e = np.zeros(d)
    e[k] = 1.0
    return e
