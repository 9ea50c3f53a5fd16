"""Common result and trace containers returned by all optimizers."""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class TracePoint:
    """Best-so-far snapshot after one stage/generation/iteration.

    `source` tags what produced the snapshot (e.g. "init", "walk", "local",
    "gen", "iter", or "hold" for a stage that accepted nothing).
    """

    stage: int
    best_mean: float
    best_std: float
    evaluations: int
    source: str = ""


@dataclass
class OptimizationResult:
    best_x: np.ndarray
    best_mean: float
    best_std: float
    evaluations: int
    stages: int
    trace: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def __str__(self):
        return (
            f"best_mean={self.best_mean:.6g} (+/- {self.best_std:.2g}) "
            f"after {self.evaluations} evaluations, {self.stages} stages"
        )
