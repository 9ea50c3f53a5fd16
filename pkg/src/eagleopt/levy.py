"""Heavy-tailed step sampling and Levy walks.

Step lengths follow a truncated power law: the survival function of an
untruncated step is S(t) = (t / step_min) ** -(exponent - 1), so most steps
are short while occasional steps are orders of magnitude longer.  A walk
move combines such a step length with a uniformly random direction and
reflects the result back into the search box.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .geometry import as_bounds, fold_into_bounds
from .rng import RngStream, unit_direction


@dataclass(frozen=True)
class LevyConfig:
    """Parameters of the truncated power-law step distribution."""

    exponent: float = 1.5
    step_min: float = 1e-3
    step_max: float = 1.0

    def __post_init__(self):
        # exponent == 1 would make the tail non-normalizable; reject it.
        if not 1.0 < self.exponent <= 3.0:
            raise ConfigError(
                f"exponent must satisfy 1 < exponent <= 3, got {self.exponent}"
            )
        if not 0.0 < self.step_min <= self.step_max:
            raise ConfigError(
                f"need 0 < step_min <= step_max, got {self.step_min}, {self.step_max}"
            )

    @classmethod
    def for_domain(cls, bounds, exponent: float = 1.5,
                   min_frac: float = 1e-3, max_frac: float = 1.0) -> "LevyConfig":
        """Scale step_min/step_max to fractions of the mean domain width."""
        b = as_bounds(bounds)
        width = float(np.mean(b[:, 1] - b[:, 0]))
        return cls(exponent=exponent, step_min=min_frac * width, step_max=max_frac * width)


def step_from_uniform(u, config: LevyConfig):
    """Map uniform-[0,1) draws to step lengths by inverse-CDF sampling."""
    u = np.asarray(u, dtype=float)
    t = config.step_min * (1.0 - u) ** (-1.0 / (config.exponent - 1.0))
    out = np.minimum(t, config.step_max)
    return float(out) if out.ndim == 0 else out


def sample_levy_step(rng: RngStream, config: LevyConfig) -> float:
    """Draw one step length."""
    return step_from_uniform(rng.gen.random(), config)


def sample_levy_steps(rng: RngStream, config: LevyConfig, size: int) -> np.ndarray:
    """Draw `size` step lengths in one vectorized pass."""
    return step_from_uniform(rng.gen.random(size), config)


def levy_walk_point(rng: RngStream, current: np.ndarray, bounds, config: LevyConfig) -> np.ndarray:
    """One walk move: random direction, power-law step, reflect into bounds."""
    b = as_bounds(bounds)
    current = np.asarray(current, dtype=float)
    if current.shape != (b.shape[0],):
        raise ConfigError(
            f"current point has shape {current.shape}, bounds are for d={b.shape[0]}"
        )
    if not np.all((current >= b[:, 0]) & (current <= b[:, 1])):
        raise ConfigError("current point must lie inside bounds")
    step = sample_levy_step(rng, config)
    return fold_into_bounds(current + step * unit_direction(rng, b.shape[0]), b)
