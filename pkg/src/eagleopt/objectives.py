"""Stochastic wrappers around benchmark problems.

A :class:`NoisyObjective` owns the evaluation counter for a trial: every
noisy draw increments it, so optimizer cost comparisons are exact.  Values
are averaged over repeated draws via :meth:`NoisyObjective.estimate_mean`,
and candidate comparisons can trade mean against spread through
:func:`robust_score`.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DimensionMismatch
from .functions import BenchmarkProblem
from .rng import RngStream

_NOISE_KINDS = ("none", "additive_gaussian", "input_gaussian")


@dataclass(frozen=True)
class NoiseModel:
    """How randomness enters an objective evaluation.

    additive_gaussian perturbs the returned value; input_gaussian perturbs
    the query point before evaluation.  `relative_to` optionally rescales
    sigma by a reference magnitude (e.g. a domain width).
    """

    kind: str = "additive_gaussian"
    sigma: float = 0.025
    relative_to: float | None = None

    def __post_init__(self):
        if self.kind not in _NOISE_KINDS:
            raise ConfigError(f"noise kind must be one of {_NOISE_KINDS}, got {self.kind!r}")
        if not self.sigma >= 0:
            raise ConfigError(f"sigma must be >= 0, got {self.sigma}")
        if self.kind == "none" and self.sigma != 0:
            raise ConfigError("kind='none' requires sigma == 0")
        if self.relative_to is not None and not self.relative_to > 0:
            raise ConfigError(f"relative_to must be > 0, got {self.relative_to}")

    @classmethod
    def none(cls) -> "NoiseModel":
        return cls(kind="none", sigma=0.0)

    @property
    def effective_sigma(self) -> float:
        scale = 1.0 if self.relative_to is None else self.relative_to
        return self.sigma * scale


class NoisyObjective:
    """A benchmark problem observed through noise, with exact eval accounting."""

    def __init__(self, problem: BenchmarkProblem, noise: NoiseModel | None = None):
        self.problem = problem
        self.noise = NoiseModel.none() if noise is None else noise
        self.eval_count = 0
        self.out_of_bounds_count = 0

    # -- plumbing ---------------------------------------------------------

    def _check(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.problem.dim,):
            raise DimensionMismatch(
                f"expected shape ({self.problem.dim},), got {x.shape}"
            )
        b = self.problem.bounds
        if np.any(x < b[:, 0]) or np.any(x > b[:, 1]):
            self.out_of_bounds_count += 1
        return x

    # -- evaluation -------------------------------------------------------

    def evaluate_deterministic(self, x) -> float:
        """Noise-free value; does not touch the evaluation counter."""
        return self.problem.evaluate(x)

    def evaluate_noisy(self, x, rng: RngStream) -> float:
        """One noisy observation; counts as one evaluation."""
        x = self._check(x)
        self.eval_count += 1
        sigma = self.noise.effective_sigma
        if sigma == 0.0:
            return self.problem.evaluate(x)
        if self.noise.kind == "input_gaussian":
            return self.problem.evaluate(x + sigma * rng.gen.standard_normal(x.shape[0]))
        return self.problem.evaluate(x) + sigma * rng.gen.standard_normal()

    def estimate_mean(self, x, rng: RngStream, n_samples: int) -> tuple:
        """Average `n_samples` noisy observations.

        Returns ``(mean, standard_error)`` and adds `n_samples` to the
        counter.  With one sample the standard error is reported as 0.  A
        noise-free objective returns the exact value without redundant
        draws (the counter still advances by `n_samples`).
        """
        if n_samples < 1:
            raise ConfigError(f"n_samples must be >= 1, got {n_samples}")
        x = self._check(x)
        self.eval_count += n_samples
        sigma = self.noise.effective_sigma
        if sigma == 0.0:
            return self.problem.evaluate(x), 0.0
        if self.noise.kind == "input_gaussian":
            pts = x + sigma * rng.gen.standard_normal((n_samples, x.shape[0]))
            values = self.problem.evaluate_batch(pts)
        else:
            values = self.problem.evaluate(x) + sigma * rng.gen.standard_normal(n_samples)
        mean = float(np.mean(values))
        if n_samples == 1:
            return mean, 0.0
        return mean, float(np.std(values, ddof=1) / math.sqrt(n_samples))

    def estimate_mean_batch(self, X, rng: RngStream, n_samples: int) -> tuple:
        """Vectorized :meth:`estimate_mean` over rows of `X` (shape (m, d))."""
        if n_samples < 1:
            raise ConfigError(f"n_samples must be >= 1, got {n_samples}")
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.problem.dim:
            raise DimensionMismatch(
                f"expected shape (m, {self.problem.dim}), got {X.shape}"
            )
        b = self.problem.bounds
        outside = np.any((X < b[:, 0]) | (X > b[:, 1]), axis=1)
        self.out_of_bounds_count += int(np.count_nonzero(outside))
        m = X.shape[0]
        self.eval_count += m * n_samples
        sigma = self.noise.effective_sigma
        if sigma == 0.0:
            return self.problem.evaluate_batch(X), np.zeros(m)
        if self.noise.kind == "input_gaussian":
            pts = X[:, None, :] + sigma * rng.gen.standard_normal((m, n_samples, X.shape[1]))
            values = self.problem.evaluate_batch(pts.reshape(m * n_samples, -1))
            values = values.reshape(m, n_samples)
        else:
            base = self.problem.evaluate_batch(X)
            values = base[:, None] + sigma * rng.gen.standard_normal((m, n_samples))
        means = values.mean(axis=1)
        if n_samples == 1:
            return means, np.zeros(m)
        return means, values.std(axis=1, ddof=1) / math.sqrt(n_samples)

    def reset_counters(self):
        self.eval_count = 0
        self.out_of_bounds_count = 0


def robust_score(mean: float, std: float, weight: float = 0.0) -> float:
    """Pessimistic value ``mean + weight * std`` used to rank candidates."""
    if not weight >= 0:
        raise ConfigError(f"weight must be >= 0, got {weight}")
    if not std >= 0:
        raise ConfigError(f"std must be >= 0, got {std}")
    return mean + weight * std
