"""Firefly search: attraction-weighted population moves inside a region.

Brightness is the negated objective estimate, so dimmer fireflies drift
toward brighter ones.  Attractiveness decays with squared distance; the
decay rate is expressed per mean-squared pair separation of the search
region, which keeps one `gamma` setting meaningful across domains of any
physical scale.  Fireflies that currently outshine the whole population
take a random exploration kick instead of an attraction move.  Every move
is re-scored immediately and charged against the evaluation budget.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .geometry import SearchRegion
from .objectives import NoisyObjective
from .result import OptimizationResult, TracePoint
from .rng import RngStream

_PAIR_SCANS = ("lower_triangular", "full")


@dataclass(frozen=True, eq=False)
class FaConfig:
    """Knobs for the firefly population search."""

    n: int = 20
    alpha: float = 0.2
    beta0: float = 1.0
    gamma: float = 1.0
    max_gen: int = 50
    n_samples: int = 3
    tolerance: float = 1e-5
    scale: np.ndarray | None = None  # random-kick scale per coordinate; None -> region widths
    pair_scan: str = "lower_triangular"
    collect_betas: bool = False

    def __post_init__(self):
        if self.n < 2:
            raise ConfigError(f"population must have n >= 2, got {self.n}")
        if not 0.0 <= self.alpha:
            raise ConfigError(f"alpha must be >= 0, got {self.alpha}")
        if not 0.0 < self.beta0:
            raise ConfigError(f"beta0 must be > 0, got {self.beta0}")
        if not 0.0 <= self.gamma:
            raise ConfigError(f"gamma must be >= 0, got {self.gamma}")
        if self.max_gen < 1:
            raise ConfigError(f"max_gen must be >= 1, got {self.max_gen}")
        if self.n_samples < 1:
            raise ConfigError(f"n_samples must be >= 1, got {self.n_samples}")
        if not 0.0 <= self.tolerance:
            raise ConfigError(f"tolerance must be >= 0, got {self.tolerance}")
        if self.pair_scan not in _PAIR_SCANS:
            raise ConfigError(f"pair_scan must be one of {_PAIR_SCANS}")
        if self.scale is not None:
            object.__setattr__(self, "scale", np.asarray(self.scale, dtype=float))


def attractiveness(r: float, beta0: float, gamma: float) -> float:
    """Perceived pull at distance r: beta0 * exp(-gamma * r**2)."""
    return float(beta0 * np.exp(-gamma * r * r))


def distance(xi, xj) -> float:
    """Euclidean separation of two fireflies."""
    return float(np.linalg.norm(np.asarray(xi, dtype=float) - np.asarray(xj, dtype=float)))


def _attraction_move(xi, xj, beta, alpha, scale, rng: RngStream):
    # Convex blend keeps beta=1 landing on xj to the last bit.
    new = (1.0 - beta) * xi + beta * xj
    if alpha > 0.0:
        new = new + alpha * scale * (rng.gen.random(xi.shape[0]) - 0.5)
    return new


def move_firefly(xi, xj, config: FaConfig, rng: RngStream,
                 region: SearchRegion | None = None, *,
                 gamma: float | None = None, scale=None) -> np.ndarray:
    """Move firefly `xi` toward a brighter `xj`, plus a random kick.

    `gamma`/`scale` override the config values (used by the driver, which
    rescales both to the active region); when a region is given the result
    is folded back inside it.
    """
    xi = np.asarray(xi, dtype=float)
    xj = np.asarray(xj, dtype=float)
    g = config.gamma if gamma is None else gamma
    if scale is None:
        scale = config.scale if config.scale is not None else np.ones(xi.shape[0])
    beta = attractiveness(distance(xi, xj), config.beta0, g)
    new = _attraction_move(xi, xj, beta, config.alpha, scale, rng)
    return region.contain(new) if region is not None else new


def fa_optimize(obj: NoisyObjective, region: SearchRegion, config: FaConfig,
                rng: RngStream, budget: int) -> OptimizationResult:
    """Run the firefly search within `region` under an evaluation budget.

    The budget is charged in units of single noisy evaluations; each scored
    position costs `config.n_samples` of them.  The returned best is the
    best-scoring position ever evaluated, not necessarily a final-population
    member.
    """
    ns = config.n_samples
    if budget < config.n * ns:
        raise ConfigError(
            f"budget {budget} cannot even score the initial population "
            f"({config.n} fireflies x {ns} samples)"
        )

    gamma_eff = config.gamma / region.mean_pair_sq
    scale = config.scale if config.scale is not None else region.box_widths
    betas: list = []

    X = np.stack([region.sample(rng) for _ in range(config.n)])
    means, errs = obj.estimate_mean_batch(X, rng, ns)
    spent = config.n * ns

    k = int(np.argmin(means))
    best_x = X[k].copy()
    best_mean = float(means[k])
    best_std = float(errs[k] * np.sqrt(ns))
    trace = [TracePoint(0, best_mean, best_std, spent, "init")]

    def rescore(i: int) -> bool:
        """Re-estimate firefly i, updating the incumbent. False if out of budget."""
        nonlocal spent, best_x, best_mean, best_std
        if spent + ns > budget:
            return False
        m, se = obj.estimate_mean(X[i], rng, ns)
        spent += ns
        means[i] = m
        errs[i] = se
        if m < best_mean:
            best_x = X[i].copy()
            best_mean = float(m)
            best_std = float(se * np.sqrt(ns))
        return True

    gen = 0
    exhausted = False
    while gen < config.max_gen and not exhausted:
        gen += 1
        prev_best = best_mean
        for i in range(config.n):
            others = range(i) if config.pair_scan == "lower_triangular" else range(config.n)
            for j in others:
                if j == i or means[j] >= means[i]:
                    continue
                beta = attractiveness(distance(X[i], X[j]), config.beta0, gamma_eff)
                if config.collect_betas:
                    betas.append(beta)
                X[i] = region.contain(
                    _attraction_move(X[i], X[j], beta, config.alpha, scale, rng)
                )
                if not rescore(i):
                    exhausted = True
                    break
            if exhausted:
                break
            if means[i] <= means.min():
                # Nothing in the population outshines this firefly: explore.
                kick = config.alpha * scale * (rng.gen.random(X.shape[1]) - 0.5)
                X[i] = region.contain(X[i] + kick)
                if not rescore(i):
                    exhausted = True
                    break
        trace.append(TracePoint(gen, best_mean, best_std, spent, "gen"))
        if prev_best - best_mean < config.tolerance and not exhausted:
            break

    extra = {"population": X.copy(), "means": means.copy()}
    if config.collect_betas:
        extra["betas"] = betas
    return OptimizationResult(best_x, best_mean, best_std, spent, gen, trace, extra)
