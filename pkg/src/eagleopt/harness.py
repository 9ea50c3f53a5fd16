"""Experiment harness: seeded trials, aggregation, and report emission.

A trial is one optimizer run against a fresh noisy objective, keyed by
(base_seed + i, stream i) so experiments are reproducible run-for-run and
trials stay independent under parallel execution.  Success is judged on the
noise-free objective, which does not count against the evaluation budget.
"""

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, is_dataclass, replace

import numpy as np

from .eagle import EsConfig, es_optimize
from .errors import ConfigError, unknown_name
from .firefly import FaConfig, fa_optimize
from .functions import BenchmarkProblem, make_problem
from .geometry import SearchRegion
from .levy import LevyConfig
from .nelder_mead import NmConfig, nelder_mead
from .objectives import NoiseModel, NoisyObjective
from .pso import PsoConfig, pso_optimize
from .rng import RngStream, sample_uniform_in_bounds

ALGORITHMS = ("es", "fa", "pso", "nm")
REPORT_COLUMNS = (
    "algorithm", "function", "dim", "sigma", "runs",
    "mean_evals_k", "std_evals_k", "success_rate_pct",
)
_STATS_MODES = ("all", "successes")

# Budget for the standalone population/simplex algorithms, overridable via
# the "budget" key; the two-stage driver bounds itself through max_stages.
_DEFAULT_BUDGET = 40_000


@dataclass(frozen=True)
class SuccessCriteria:
    """How a finished trial is scored against the known optimum."""

    mode: str = "value_gap"
    value_eps: float = 1e-2
    position_eps_frac: float = 1e-2  # fraction of the mean domain width

    def __post_init__(self):
        if self.mode not in ("value_gap", "position_gap"):
            raise ConfigError(f"unknown success mode {self.mode!r}")
        if not self.value_eps > 0 or not self.position_eps_frac > 0:
            raise ConfigError("success tolerances must be > 0")


@dataclass(frozen=True)
class TrialRecord:
    algorithm: str
    function: str
    dim: int
    seed: int
    evaluations: int
    success: bool
    best_x: tuple
    best_value: float
    wall_time: float


@dataclass(frozen=True)
class ExperimentReport:
    algorithm: str
    function: str
    dim: int
    sigma: float
    runs: int
    mean_evals_k: float
    std_evals_k: float
    success_rate_pct: float

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in REPORT_COLUMNS}


def success_check(best_x, problem: BenchmarkProblem, criteria: SuccessCriteria) -> bool:
    """Score a final position against the problem's known optimum."""
    x = np.asarray(best_x, dtype=float)
    if criteria.mode == "value_gap":
        return problem.evaluate(x) - problem.f_star <= criteria.value_eps
    eps = criteria.position_eps_frac * float(np.mean(problem.widths))
    return min(float(np.linalg.norm(x - m)) for m in problem.minimizers) <= eps


# ---------------------------------------------------------------------------
# configuration plumbing
# ---------------------------------------------------------------------------

def default_config(algorithm: str, problem: BenchmarkProblem, *,
                   pop: int = 20, tol: float = 1e-5):
    """Reference configuration used by the protocol runs and the CLI."""
    if algorithm == "es":
        # Stage shape: one cheap scatter generation per exploration ball while
        # descending, a sharper two-sample scatter plus a surrogate-model
        # candidate once the ball reaches its floor, and confirmation effort
        # that tracks the ball radius.
        base = dict(
            local="fa",
            fa=FaConfig(n=pop, n_samples=1, max_gen=8, tolerance=0.0),
            nm=NmConfig(n_samples=3),
            walk_exponent=2.8,
            walk_step_frac=0.15,
            robust_weight=1.5,
            radius_shrink=0.65,
            centroid_top=3,
            pick_final="model",
            surrogate="cone",
            surrogate_stages=6,
            outer_tolerance=tol,
            local_budget=pop,
            local_budget_final=2 * pop,
            local_samples_final=2,
            walk_samples=1,
            confirm_samples=3,
            confirm_final=30,
            confirm_width=9.0,
        )
        if problem.dim <= 2:
            # Streaks of rejected stages inside runs that go on to converge
            # stay in single digits, so both cutoffs below only touch runs
            # whose current basin is already lost: a dozen straight rejections
            # reset the ball for a fresh look elsewhere, and forty end the
            # run (on near-flat landscapes noise-level accepts would otherwise
            # keep a hopeless run alive to the stage cap).
            return EsConfig(
                radius_shrink_fine=0.35,
                radius_fine_frac=0.008,
                radius_floor_frac=1.5e-4,
                max_stages=80,
                restart_after=12,
                stall_stages=40,
                **base,
            )
        # In higher dimensions a scatter of `pop` points localizes the minimum
        # by a nearly constant factor per stage (ball volume concentrates near
        # the surface), so an every-stage shrink schedule outruns the real
        # progress and strands the incumbent outside a microscopic ball.
        # Contract only after accepted stages instead, and give up after a
        # long run of rejections rather than polishing a lost cause.
        return EsConfig(
            shrink_on="accept",
            stall_stages=12,
            radius_floor_frac=5e-3,
            max_stages=240,
            **base,
        )
    if algorithm == "fa":
        return FaConfig(n=pop, n_samples=3, max_gen=500, tolerance=tol)
    if algorithm == "pso":
        return PsoConfig(n=pop, n_samples=3, tolerance=tol)
    if algorithm == "nm":
        return NmConfig(n_samples=3, tolerance=tol, max_evals=_DEFAULT_BUDGET)
    raise unknown_name("algorithm", algorithm, ALGORITHMS)


def apply_overrides(config, overrides: dict):
    """Return a copy of a (possibly nested) config with dotted keys replaced.

    ``{"fa.gamma": 2.0}`` updates config.fa.gamma; plain keys update top-level
    fields.  Dict values replace whole nested configs field-by-field.
    """
    if not overrides:
        return config
    flat: dict = {}
    nested: dict = {}
    for key, value in overrides.items():
        head, _, rest = key.partition(".")
        if rest:
            nested.setdefault(head, {})[rest] = value
        else:
            flat[head] = value
    known = {f.name: f for f in fields(config)}
    for head, sub in nested.items():
        if head not in known:
            raise unknown_name("config field", head, known)
        inner = getattr(config, head)
        if inner is None:
            raise ConfigError(f"cannot set {head!r} fields: it is unset on {type(config).__name__}")
        nested_cfg = apply_overrides(inner, sub)
        flat[head] = nested_cfg
    out = {}
    for key, value in flat.items():
        if key not in known:
            raise unknown_name("config field", key, known)
        current = getattr(config, key)
        if isinstance(value, dict) and is_dataclass(current):
            value = apply_overrides(current, value)
        elif (isinstance(current, int) and not isinstance(current, bool)
              and isinstance(value, float) and value.is_integer()):
            value = int(value)
        out[key] = value
    return replace(config, **out)


def _make_noise(sigma: float) -> NoiseModel:
    if sigma == 0:
        return NoiseModel.none()
    return NoiseModel(kind="additive_gaussian", sigma=sigma)


# ---------------------------------------------------------------------------
# trials
# ---------------------------------------------------------------------------

def _run_trial(algorithm: str, function: str, *, dim=None, sigma: float = 0.025,
               seed: int = 0, stream_id: int = 0, criteria: SuccessCriteria | None = None,
               pop: int = 20, tol: float = 1e-5, overrides: dict | None = None):
    if algorithm not in ALGORITHMS:
        raise unknown_name("algorithm", algorithm, ALGORITHMS)
    criteria = criteria or SuccessCriteria()
    overrides = dict(overrides or {})
    budget = int(overrides.pop("budget", _DEFAULT_BUDGET))

    problem = make_problem(function, dim)
    obj = NoisyObjective(problem, _make_noise(sigma))
    rng = RngStream(seed, stream_id)
    config = apply_overrides(default_config(algorithm, problem, pop=pop, tol=tol), overrides)

    t0 = time.perf_counter()
    if algorithm == "es":
        result = es_optimize(obj, config, rng)
    elif algorithm == "fa":
        result = fa_optimize(obj, SearchRegion(problem.bounds), config, rng, budget)
    elif algorithm == "pso":
        result = pso_optimize(obj, problem.bounds, config, rng)
    else:
        start = sample_uniform_in_bounds(rng, problem.bounds)
        radius = 0.25 * float(np.mean(problem.widths))
        result = nelder_mead(obj, start, radius, config, rng, bounds=problem.bounds)
    wall = time.perf_counter() - t0

    if result.evaluations != obj.eval_count:
        raise RuntimeError(
            f"evaluation ledger out of sync: result={result.evaluations}, "
            f"objective counted {obj.eval_count}"
        )
    record = TrialRecord(
        algorithm=algorithm,
        function=function,
        dim=problem.dim,
        seed=seed,
        evaluations=result.evaluations,
        success=success_check(result.best_x, problem, criteria),
        best_x=tuple(float(v) for v in result.best_x),
        best_value=problem.evaluate(result.best_x),
        wall_time=wall,
    )
    return record, result


def run_trial(algorithm: str, function: str, **kwargs) -> TrialRecord:
    """Run one seeded trial; see :func:`run_experiment` for the knobs."""
    record, _ = _run_trial(algorithm, function, **kwargs)
    return record


def _pool_worker(kwargs):
    record, _ = _run_trial(**kwargs)
    return record


def run_experiment(algorithm: str, function: str, *, dim=None, sigma: float = 0.025,
                   n_runs: int = 100, base_seed: int = 0,
                   criteria: SuccessCriteria | None = None,
                   pop: int = 20, tol: float = 1e-5, overrides: dict | None = None,
                   stats_over: str = "all", jobs: int = 1,
                   collect_traces: bool = False):
    """Run `n_runs` independent trials and aggregate them.

    Trial i uses seed ``base_seed + i`` on stream i.  Returns
    ``(report, records)``, or ``(report, records, traces)`` when
    `collect_traces` is set (traces force sequential execution).
    """
    if n_runs < 1:
        raise ConfigError(f"n_runs must be >= 1, got {n_runs}")
    if stats_over not in _STATS_MODES:
        raise ConfigError(f"stats_over must be one of {_STATS_MODES}, got {stats_over!r}")
    per_trial = [
        dict(algorithm=algorithm, function=function, dim=dim, sigma=sigma,
             seed=base_seed + i, stream_id=i, criteria=criteria,
             pop=pop, tol=tol, overrides=overrides)
        for i in range(n_runs)
    ]

    traces = []
    if jobs > 1 and not collect_traces:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_pool_worker, per_trial))
    else:
        records = []
        for kwargs in per_trial:
            record, result = _run_trial(**kwargs)
            records.append(record)
            if collect_traces:
                traces.append(result.trace)

    probed = make_problem(function, dim)
    report = summarize(records, sigma=sigma, dim=probed.dim, stats_over=stats_over)
    if collect_traces:
        return report, records, traces
    return report, records


def summarize(records, *, sigma: float, dim: int, stats_over: str = "all") -> ExperimentReport:
    """Aggregate trial records into one report row."""
    if not records:
        raise ConfigError("cannot summarize zero records")
    subset = [r for r in records if r.success] if stats_over == "successes" else list(records)
    if subset:
        evals = np.array([r.evaluations for r in subset], dtype=float)
        mean_k = float(evals.mean() / 1e3)
        std_k = float(evals.std() / 1e3)  # population spread over the run set
    else:
        mean_k = std_k = 0.0
    rate = 100.0 * sum(r.success for r in records) / len(records)
    first = records[0]
    return ExperimentReport(
        algorithm=first.algorithm,
        function=first.function,
        dim=dim,
        sigma=sigma,
        runs=len(records),
        mean_evals_k=mean_k,
        std_evals_k=std_k,
        success_rate_pct=rate,
    )


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------

def format_stats(mean_evals_k: float, std_evals_k: float, success_rate_pct: float) -> str:
    """Compact cell: evaluations in thousands with the success rate."""
    return f"{mean_evals_k:.1f} ± {std_evals_k:.2f} ({success_rate_pct:.0f})"


def emit_report(reports, fmt: str = "table") -> str:
    """Render report rows as a json/csv/table document."""
    reports = list(reports)
    if fmt == "json":
        doc = {"reports": [r.as_dict() for r in reports]}
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for r in reports:
            writer.writerow([r.algorithm, r.function, r.dim, r.sigma, r.runs,
                             r.mean_evals_k, r.std_evals_k, r.success_rate_pct])
        return buf.getvalue()
    if fmt == "table":
        headers = ["algorithm", "function", "dim", "sigma", "runs", "evals_k (success%)"]
        rows = [
            [r.algorithm, r.function, str(r.dim), f"{r.sigma:g}", str(r.runs),
             format_stats(r.mean_evals_k, r.std_evals_k, r.success_rate_pct)]
            for r in reports
        ]
        widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h)
                  for i, h in enumerate(headers)]
        lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
        lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows]
        return "\n".join(lines) + "\n"
    raise ConfigError(f"unknown report format {fmt!r} (use json, csv, or table)")


def parse_report_json(text: str):
    """Inverse of ``emit_report(..., fmt='json')``."""
    doc = json.loads(text)
    return [ExperimentReport(**entry) for entry in doc["reports"]]


def trace_csv(traces) -> str:
    """Flatten per-trial convergence traces into one plot-ready CSV."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["trial", "stage", "evaluations", "best_mean", "best_std", "source"])
    for t, trace in enumerate(traces):
        for point in trace:
            writer.writerow([t, point.stage, point.evaluations, point.best_mean,
                             point.best_std, point.source])
    return buf.getvalue()
