"""Seeded random streams.

Every stochastic component draws from an explicit :class:`RngStream` so that
a (seed, stream_id) pair fully determines a run.  Independent trials get
independent stream ids; nothing in the package touches global RNG state.
"""

import numpy as np

from .errors import ConfigError

_MAX_SEED = 2**64


class RngStream:
    """A reproducible random stream keyed by (seed, stream_id)."""

    __slots__ = ("seed", "stream_id", "gen")

    def __init__(self, seed: int, stream_id: int = 0):
        for label, value in (("seed", seed), ("stream_id", stream_id)):
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
                raise ConfigError(f"{label} must be an integer, got {value!r}")
            if not 0 <= value < _MAX_SEED:
                raise ConfigError(f"{label} must lie in [0, 2**64), got {value}")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self.gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(entropy=(self.seed, self.stream_id)))
        )

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"


def sample_uniform_in_bounds(rng: RngStream, bounds: np.ndarray) -> np.ndarray:
    """Draw one point uniformly from the box given as a (d, 2) array."""
    lo = bounds[:, 0]
    wid = bounds[:, 1] - lo
    return lo + wid * rng.gen.random(bounds.shape[0])


def sample_gaussian(rng: RngStream, mean: float, sigma: float) -> float:
    """One draw from N(mean, sigma^2); sigma == 0 returns mean exactly."""
    if sigma < 0:
        raise ConfigError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0.0:
        return float(mean)
    return float(mean + sigma * rng.gen.standard_normal())


def unit_direction(rng: RngStream, dim: int) -> np.ndarray:
    """Uniform random direction on the unit sphere in `dim` dimensions."""
    while True:
        v = rng.gen.standard_normal(dim)
        norm = float(np.linalg.norm(v))
        if norm > 1e-12:  # degenerate draws are astronomically rare but cheap to guard
            return v / norm
