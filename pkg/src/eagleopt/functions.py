"""Noise-free benchmark problems and their registry.

Each problem carries its conventional box domain together with the exact
optimum location and value, so experiment code can score candidate points
against ground truth.  Optima that have no closed form are pinned down
numerically: separable per-coordinate pieces are minimized on a dense grid
and polished with a bounded scalar search, while product-form optima are
frozen as high-precision constants.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from ._kernels import KERNELS, SCHWEFEL_XSTAR
from .errors import ConfigError, DimensionMismatch, unknown_name
from .geometry import as_bounds

# Extrema of the scalar factor h(x) = sum_{j=1..5} j cos((j+1) x + j) on
# [-10, 10]: three equal-depth minima, three equal-height maxima.  The 2-D
# product h(x1) h(x2) is minimal when one factor sits at a minimum of h and
# the other at a maximum, giving 3 * 3 * 2 = 18 global minimizers.
_SHUBERT_H_ARGMIN = (-7.7083137354993474477, -1.4251284283197609708, 4.8580568788598255062)
_SHUBERT_H_ARGMAX = (-7.0835064076515596016, -0.80032110047197312466, 5.4828642067076133523)
_SHUBERT_FSTAR = -186.7309088310238258598437


@dataclass(frozen=True, eq=False)
class BenchmarkProblem:
    """A noise-free objective on a box domain with known optimum."""

    name: str
    dim: int
    bounds: np.ndarray  # (d, 2)
    f_star: float
    x_star: np.ndarray
    minimizers: tuple  # every known global minimizer, x_star first
    formula: str

    @property
    def widths(self) -> np.ndarray:
        return self.bounds[:, 1] - self.bounds[:, 0]

    def evaluate(self, x) -> float:
        """Exact objective value at a single point."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionMismatch(
                f"{self.name} expects shape ({self.dim},), got {x.shape}"
            )
        return float(KERNELS[self.name](np.ascontiguousarray(x[None, :]))[0])

    def evaluate_batch(self, X) -> np.ndarray:
        """Exact objective values for a batch of shape (m, d)."""
        X = np.ascontiguousarray(np.asarray(X, dtype=float))
        if X.ndim != 2 or X.shape[1] != self.dim:
            raise DimensionMismatch(
                f"{self.name} expects batches of shape (m, {self.dim}), got {X.shape}"
            )
        return KERNELS[self.name](X)


@lru_cache(maxsize=None)
def _michalewicz_component(i: int) -> tuple:
    """Minimizer and minimum of -sin(x) sin(i x^2 / pi)^20 on [0, pi].

    The factor oscillates faster as i grows, so the grid density scales
    with i before the bounded polish step.
    """

    def g(x):
        return -math.sin(x) * math.sin(i * x * x / math.pi) ** 20

    n = max(4096, 512 * i)
    xs = np.linspace(0.0, math.pi, n)
    vals = -np.sin(xs) * np.sin(i * xs * xs / np.pi) ** 20
    k = int(np.argmin(vals))
    res = minimize_scalar(
        g,
        bounds=(xs[max(k - 2, 0)], xs[min(k + 2, n - 1)]),
        method="bounded",
        options={"xatol": 1e-12},
    )
    if res.fun <= vals[k]:
        return float(res.x), float(res.fun)
    return float(xs[k]), float(vals[k])  # pragma: no cover - polish never loses


def _michalewicz_optimum(dim: int) -> tuple:
    pieces = [_michalewicz_component(i) for i in range(1, dim + 1)]
    x_star = np.array([p[0] for p in pieces])
    f_star = math.fsum(p[1] for p in pieces)
    return x_star, f_star


def _shubert_minimizers() -> tuple:
    pts = [np.array([a, b]) for a in _SHUBERT_H_ARGMIN for b in _SHUBERT_H_ARGMAX]
    pts += [np.array([b, a]) for a in _SHUBERT_H_ARGMIN for b in _SHUBERT_H_ARGMAX]
    return tuple(pts)


# name -> (default_dim, (lo, hi), fixed_dim?, formula)
_SPECS = {
    "ackley": (128, (-32.768, 32.768), False,
               "20 (1 - exp(-0.2 sqrt(mean(x_k^2)))) + e - exp(mean(cos(2 pi x_k)))"),
    "dejong": (256, (-5.12, 5.12), False, "sum(x_k^2)"),
    "rosenbrock": (16, (-5.0, 10.0), False,
                   "sum(100 (x_{k+1} - x_k^2)^2 + (1 - x_k)^2)"),
    "rastrigin": (16, (-5.12, 5.12), False, "10 d + sum(x_k^2 - 10 cos(2 pi x_k))"),
    "griewank": (16, (-600.0, 600.0), False,
                 "sum(x_k^2)/4000 - prod(cos(x_k / sqrt(k))) + 1"),
    "schwefel": (128, (-500.0, 500.0), False,
                 "418.9828872724337 d - sum(x_k sin(sqrt(|x_k|)))"),
    "michalewicz": (16, (0.0, math.pi), False, "-sum(sin(x_k) sin(k x_k^2 / pi)^20)"),
    "easom": (2, (-100.0, 100.0), True,
              "-cos(x_1) cos(x_2) exp(-((x_1 - pi)^2 + (x_2 - pi)^2))"),
    "shubert": (2, (-10.0, 10.0), True, "prod_k sum_{j=1..5} j cos((j+1) x_k + j)"),
}


def available_functions() -> list:
    return sorted(_SPECS)


def make_problem(name: str, dim: int | None = None) -> BenchmarkProblem:
    """Build a benchmark problem, optionally overriding the default dimension."""
    if name not in _SPECS:
        raise unknown_name("function", name, _SPECS)
    default_dim, (lo, hi), fixed, formula = _SPECS[name]
    d = default_dim if dim is None else int(dim)
    if d < 1:
        raise ConfigError(f"dim must be >= 1, got {d}")
    if fixed and d != default_dim:
        raise ConfigError(f"{name} is only defined for dim={default_dim}")
    if name == "rosenbrock" and d < 2:
        raise ConfigError("rosenbrock needs dim >= 2")
    bounds = as_bounds(np.tile((lo, hi), (d, 1)))

    minimizers: tuple
    if name in ("ackley", "dejong", "rastrigin", "griewank"):
        x_star, f_star = np.zeros(d), 0.0
    elif name == "rosenbrock":
        x_star, f_star = np.ones(d), 0.0
    elif name == "schwefel":
        x_star, f_star = np.full(d, SCHWEFEL_XSTAR), 0.0
    elif name == "michalewicz":
        x_star, f_star = _michalewicz_optimum(d)
    elif name == "easom":
        x_star, f_star = np.full(2, np.pi), -1.0
    else:  # shubert
        minimizers = _shubert_minimizers()
        x_star, f_star = minimizers[0], _SHUBERT_FSTAR
        return BenchmarkProblem("shubert", 2, bounds, f_star, x_star, minimizers, formula)

    return BenchmarkProblem(name, d, bounds, f_star, x_star, (x_star,), formula)


def registry_document() -> dict:
    """Full registry (default dimensions) as a JSON-ready dict."""
    entries = []
    for name in available_functions():
        problem = make_problem(name)
        lo, hi = problem.bounds[0]
        entries.append(
            {
                "name": name,
                "default_dim": problem.dim,
                "bounds": [float(lo), float(hi)],
                "f_star": problem.f_star,
                "x_star": [float(v) for v in problem.x_star],
                "n_global_minima": len(problem.minimizers),
                "formula": problem.formula,
            }
        )
    return {"functions": entries}
