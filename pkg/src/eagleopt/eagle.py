"""Two-stage eagle search: roam far, then strike locally.

Each stage launches a heavy-tailed walk move from the incumbent, runs an
intensive local search in a ball around the landing point, re-confirms the
most promising candidate with extra samples, and accepts it only if its
confirmed robust score strictly beats the incumbent's.  The local ball
shrinks geometrically from stage to stage down to a floor, so early stages
explore basins while late stages polish.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError
from .firefly import FaConfig, fa_optimize
from .geometry import SearchRegion
from .levy import LevyConfig, levy_walk_point
from .nelder_mead import NmConfig, nelder_mead
from .objectives import NoisyObjective, robust_score
from .result import OptimizationResult, TracePoint
from .rng import RngStream, sample_uniform_in_bounds

_LOCAL_KINDS = ("fa", "nm")
_STOP_KINDS = ("score", "position")
_CANDIDATE_KINDS = ("walk", "local", "centroid", "mean", "model")
_ORIGIN_KINDS = ("best", "floor-mean")
_SURROGATE_KINDS = ("cone", "quad")
_SHRINK_KINDS = ("stage", "accept", "step")


@dataclass(frozen=True)
class EsConfig:
    """Configuration of the two-stage search.

    With ``levy=None`` (default) the walk step scale tracks the shrinking
    local radius: step_min is `walk_step_frac` times the current radius and
    step_max spans the domain (or `walk_step_max_frac` times the radius when
    that is set), so early stages roam globally while late stages probe at
    the resolution being searched.  The heavy tail keeps occasional long
    escape jumps alive at every stage.  Passing an explicit
    :class:`LevyConfig` pins one fixed step distribution for all stages.

    Confirmation effort can likewise track the radius: with
    ``confirm_width > 0`` each stage re-samples its candidate
    ``(confirm_width * sigma / radius)^2`` times (clipped between
    `confirm_samples` and `confirm_final`), since distinguishing values a
    radius apart needs the estimator's error pushed below the value spread
    across the ball.  With ``confirm_width=0`` stages use `confirm_samples`
    until the radius floor and `confirm_final` afterwards.

    `local_final`, `local_budget_final` and `local_samples_final` optionally
    give the floor-radius polish stages their own local-search method, budget
    and per-point sample count: a population search earns its keep while the
    ball still spans several basins, but once the ball is a small convex
    patch a contracting simplex squeezes more precision out of the same
    evaluations, and once candidate values sit inside the noise band, ranking
    them needs averaged measurements more than it needs extra points.

    ``shrink_on`` picks what contracts the ball: every stage (the classic
    ladder), accepted stages only, or — with ``"step"`` — accepted stages
    resized to `step_radius_frac` times the accepted move length, keeping the
    probing scale tied to the progress actually measured.  Long rejection
    streaks can reset the ball to its initial radius for a fresh look
    (`restart_after`) or end the run (`stall_stages`).
    """

    levy: LevyConfig | None = None
    walk_exponent: float = 1.5
    walk_step_frac: float = 0.25
    walk_step_max_frac: float | None = None
    local: str = "fa"
    local_final: str | None = None  # local-search method once the radius hits its floor
    fa: FaConfig = FaConfig()
    nm: NmConfig = NmConfig()
    radius_init_frac: float = 0.5  # initial local-ball radius / mean domain width
    radius_shrink: float = 0.75
    radius_shrink_fine: float | None = None  # shrink rate once the radius is "fine"
    radius_fine_frac: float = 0.0  # radius / mean width below which the fine rate applies
    radius_floor_frac: float = 1e-3
    floor_shrink: float = 1.0  # multiplies the radius floor after each accepted floor stage
    restart_after: int | None = None  # consecutive holds before the ball resets to its initial radius
    shrink_on: str = "stage"  # "accept"/"step" contract the ball only after accepted stages
    step_radius_frac: float = 1.5  # ball radius per unit accepted-move length (shrink_on="step")
    hold_grace: int = 1  # consecutive holds before rejected stages contract (shrink_on="step")
    outer_tolerance: float = 1e-5
    max_stages: int = 50
    stall_stages: int | None = None  # consecutive rejected stages before giving up
    max_evals: int | None = None
    local_budget: int = 600  # single evaluations per local stage; 0 disables local search
    local_budget_final: int | None = None  # local budget once the radius hits its floor
    local_samples_final: int | None = None  # local-search samples per point at the floor
    centroid_top: int = 0  # >=2 adds the mean of the k best local points as a candidate
    average_accepts: bool = False  # add the mean of floor-phase accepted points as a candidate
    select_samples: int = 0  # >0 re-measures every stage candidate before picking one to confirm
    pick_final: str | None = None  # floor stages confirm this candidate kind when present
    walk_origin: str = "best"  # "floor-mean" walks from the mean of floor-phase accepts
    surrogate: str | None = None  # fit floor-phase samples, propose the fit's minimum
    surrogate_stages: int = 6  # how many recent floor-stage clouds feed the fit
    pool_floor: bool = False  # pool confirmation samples across floor-phase stages
    walk_samples: int = 3
    confirm_samples: int = 10
    confirm_final: int | None = None  # confirmation samples once the radius hits its floor
    confirm_width: float = 0.0  # >0 scales confirmation effort with 1/radius^2
    confirm_gate: float = 0.0  # screening fraction of the confirmation batch
    robust_weight: float = 0.0
    stop_on: str = "score"

    def __post_init__(self):
        if self.local not in _LOCAL_KINDS:
            raise ConfigError(f"local must be one of {_LOCAL_KINDS}, got {self.local!r}")
        if self.local_final is not None and self.local_final not in _LOCAL_KINDS:
            raise ConfigError(
                f"local_final must be one of {_LOCAL_KINDS} or None, got {self.local_final!r}"
            )
        if self.stop_on not in _STOP_KINDS:
            raise ConfigError(f"stop_on must be one of {_STOP_KINDS}, got {self.stop_on!r}")
        if not 0.0 < self.radius_init_frac <= 1.0:
            raise ConfigError(f"radius_init_frac must lie in (0, 1], got {self.radius_init_frac}")
        if not 0.0 < self.radius_shrink <= 1.0:
            raise ConfigError(f"radius_shrink must lie in (0, 1], got {self.radius_shrink}")
        if self.radius_shrink_fine is not None and not 0.0 < self.radius_shrink_fine <= 1.0:
            raise ConfigError(
                f"radius_shrink_fine must lie in (0, 1], got {self.radius_shrink_fine}"
            )
        if not self.radius_fine_frac >= 0.0:
            raise ConfigError(f"radius_fine_frac must be >= 0, got {self.radius_fine_frac}")
        if not 0.0 < self.radius_floor_frac <= self.radius_init_frac:
            raise ConfigError(
                "radius_floor_frac must lie in (0, radius_init_frac], "
                f"got {self.radius_floor_frac}"
            )
        if not 0.0 < self.floor_shrink <= 1.0:
            raise ConfigError(f"floor_shrink must lie in (0, 1], got {self.floor_shrink}")
        if self.restart_after is not None and self.restart_after < 1:
            raise ConfigError(f"restart_after must be >= 1, got {self.restart_after}")
        if self.shrink_on not in _SHRINK_KINDS:
            raise ConfigError(f"shrink_on must be one of {_SHRINK_KINDS}, got {self.shrink_on!r}")
        if not self.step_radius_frac > 0:
            raise ConfigError(f"step_radius_frac must be > 0, got {self.step_radius_frac}")
        if self.hold_grace < 1:
            raise ConfigError(f"hold_grace must be >= 1, got {self.hold_grace}")
        if self.stall_stages is not None and self.stall_stages < 1:
            raise ConfigError(f"stall_stages must be >= 1, got {self.stall_stages}")
        if not self.outer_tolerance >= 0:
            raise ConfigError(f"outer_tolerance must be >= 0, got {self.outer_tolerance}")
        if self.max_stages < 1:
            raise ConfigError(f"max_stages must be >= 1, got {self.max_stages}")
        if self.local_budget < 0:
            raise ConfigError(f"local_budget must be >= 0, got {self.local_budget}")
        if self.local_budget_final is not None and self.local_budget_final < 0:
            raise ConfigError(
                f"local_budget_final must be >= 0, got {self.local_budget_final}"
            )
        if self.local_samples_final is not None and self.local_samples_final < 1:
            raise ConfigError(
                f"local_samples_final must be >= 1, got {self.local_samples_final}"
            )
        if self.centroid_top < 0 or self.centroid_top == 1:
            raise ConfigError(
                f"centroid_top must be 0 (off) or >= 2, got {self.centroid_top}"
            )
        if self.select_samples < 0:
            raise ConfigError(f"select_samples must be >= 0, got {self.select_samples}")
        if self.pick_final is not None and self.pick_final not in _CANDIDATE_KINDS:
            raise ConfigError(
                f"pick_final must be one of {_CANDIDATE_KINDS} or None, got {self.pick_final!r}"
            )
        if self.walk_origin not in _ORIGIN_KINDS:
            raise ConfigError(
                f"walk_origin must be one of {_ORIGIN_KINDS}, got {self.walk_origin!r}"
            )
        if self.surrogate is not None and self.surrogate not in _SURROGATE_KINDS:
            raise ConfigError(
                f"surrogate must be one of {_SURROGATE_KINDS} or None, got {self.surrogate!r}"
            )
        if self.surrogate_stages < 1:
            raise ConfigError(f"surrogate_stages must be >= 1, got {self.surrogate_stages}")
        if self.walk_samples < 1 or self.confirm_samples < 1:
            raise ConfigError("walk_samples and confirm_samples must be >= 1")
        if self.confirm_final is not None and self.confirm_final < 1:
            raise ConfigError(f"confirm_final must be >= 1, got {self.confirm_final}")
        if not self.confirm_width >= 0:
            raise ConfigError(f"confirm_width must be >= 0, got {self.confirm_width}")
        if not 0.0 <= self.confirm_gate < 1.0:
            raise ConfigError(f"confirm_gate must lie in [0, 1), got {self.confirm_gate}")
        if not self.robust_weight >= 0:
            raise ConfigError(f"robust_weight must be >= 0, got {self.robust_weight}")
        if not 1.0 < self.walk_exponent <= 3.0:
            raise ConfigError(
                f"walk_exponent must satisfy 1 < exponent <= 3, got {self.walk_exponent}"
            )
        if not self.walk_step_frac > 0:
            raise ConfigError(f"walk_step_frac must be > 0, got {self.walk_step_frac}")
        if self.walk_step_max_frac is not None and not self.walk_step_max_frac >= self.walk_step_frac:
            raise ConfigError(
                "walk_step_max_frac must be >= walk_step_frac, "
                f"got {self.walk_step_max_frac}"
            )


def _pool_se(entry) -> float:
    """Standard error of a pooled entry [x, n, mean, M2]."""
    _, n, _, m2 = entry
    if n <= 1:
        return 0.0
    return float(np.sqrt(m2 / (n - 1)) / np.sqrt(n))


def _pool_merge(entry, batch_mean: float, batch_se: float, batch_n: int) -> None:
    """Fold a fresh batch estimate into a pooled entry, Chan-style."""
    _, n, mean, m2 = entry
    batch_var = batch_se * batch_se * batch_n
    batch_m2 = (batch_n - 1) * batch_var
    total = n + batch_n
    delta = batch_mean - mean
    entry[3] = m2 + batch_m2 + delta * delta * n * batch_n / total
    entry[2] = mean + delta * batch_n / total
    entry[1] = total


def _fit_cone(X, y, x_init):
    """Least-squares fit of f(x) = c0 + slope * |x - apex| by Gauss-Newton.

    A sharp minimum looks like a cone at the scale of the polish ball, and
    the apex of the fitted cone pools position information from every
    sampled point instead of only the few luckiest ones.
    """
    apex = np.array(x_init, dtype=float)
    r = np.sqrt(((X - apex) ** 2).sum(axis=1)) + 1e-12
    slope = max((y.max() - y.min()) / max(r.max(), 1e-12), 1e-12)
    c0 = float(y.min())
    for _ in range(10):
        d = X - apex
        r = np.sqrt((d * d).sum(axis=1)) + 1e-12
        res = y - (c0 + slope * r)
        jac = np.hstack([-slope * d / r[:, None], r[:, None], np.ones((len(X), 1))])
        try:
            step, *_ = np.linalg.lstsq(jac, res, rcond=None)
        except np.linalg.LinAlgError:
            return None
        apex = apex + step[:-2]
        slope = max(slope + step[-2], 1e-12)
        c0 = c0 + step[-1]
    return apex


def _fit_quad(X, y):
    """Vertex of a least-squares quadratic surface, or None if the fit is
    rank-deficient or not convex."""
    d = X.shape[1]
    cols = [np.ones(len(X)), *(X[:, i] for i in range(d))]
    pairs = [(i, j) for i in range(d) for j in range(i, d)]
    cols.extend(X[:, i] * X[:, j] for i, j in pairs)
    try:
        coef, *_ = np.linalg.lstsq(np.column_stack(cols), y, rcond=None)
    except np.linalg.LinAlgError:
        return None
    grad = coef[1:d + 1]
    hess = np.zeros((d, d))
    for c, (i, j) in zip(coef[d + 1:], pairs):
        if i == j:
            hess[i, i] = 2.0 * c
        else:
            hess[i, j] = hess[j, i] = c
    if np.linalg.eigvalsh(hess).min() <= 1e-12:
        return None
    return np.linalg.solve(hess, -grad)


def _surrogate_point(kind, clouds, origin, radius):
    """Minimum of a local model fitted to recent sample clouds near `origin`.

    Points further than a few radii out belong to some other basin (a long
    walk jump) and would only skew the fit, so they are dropped.
    """
    X = np.vstack([c[0] for c in clouds])
    y = np.concatenate([c[1] for c in clouds])
    near = np.sqrt(((X - origin) ** 2).sum(axis=1)) <= 3.0 * radius
    if near.sum() < X.shape[1] + 3:
        return None
    X, y = X[near], y[near]
    order = np.argsort(y, kind="stable")
    anchor = X[order[:3]].mean(axis=0)
    if kind == "cone":
        fit = _fit_cone(X, y, anchor)
    else:
        fit = _fit_quad(X, y)
    if fit is None or not np.all(np.isfinite(fit)):
        return None
    # A minimum outside the sampled region is extrapolation, not evidence.
    if np.linalg.norm(fit - X.mean(axis=0)) > 2.0 * radius:
        return None
    return fit


def _local_search(obj, config, method, rng, center, radius, budget, n_samples):
    """One exploitation stage around `center`. Returns None when the budget
    cannot cover the method's minimum start-up cost."""
    if method == "fa":
        if budget < config.fa.n * n_samples:
            return None
        fa_cfg = config.fa
        if n_samples != fa_cfg.n_samples:
            fa_cfg = replace(fa_cfg, n_samples=n_samples)
        region = SearchRegion(obj.problem.bounds, center=center, radius=radius)
        return fa_optimize(obj, region, fa_cfg, rng, budget)
    d = obj.problem.dim
    if budget < (d + 1) * n_samples:
        return None
    nm_cfg = replace(config.nm, max_evals=budget, n_samples=n_samples)
    return nelder_mead(obj, center, radius, nm_cfg, rng, bounds=obj.problem.bounds)


def es_optimize(obj: NoisyObjective, config: EsConfig, rng: RngStream,
                x0=None) -> OptimizationResult:
    """Run the two-stage search on a noisy objective.

    Stops when the confirmed robust score (or the incumbent position, with
    ``stop_on="position"``) moves by less than `outer_tolerance` on an
    accepted update, or after `max_stages` stages, or when `max_evals`
    would be exceeded.
    """
    bounds = obj.problem.bounds
    widths = obj.problem.widths
    mean_width = float(np.mean(widths))
    radius = config.radius_init_frac * mean_width
    floor = config.radius_floor_frac * mean_width
    # `floor` may keep dropping after floor-phase accepts (see floor_shrink);
    # phase flags and confirmation effort key off where the floor started.
    floor0 = floor

    def walk_config(r: float) -> LevyConfig:
        if config.levy is not None:
            return config.levy
        step_min = min(config.walk_step_frac * r, mean_width)
        step_max = mean_width
        if config.walk_step_max_frac is not None:
            step_max = min(max(config.walk_step_max_frac * r, step_min), mean_width)
        return LevyConfig(exponent=config.walk_exponent,
                          step_min=step_min, step_max=step_max)

    eval0 = obj.eval_count

    def spent() -> int:
        return obj.eval_count - eval0

    if x0 is None:
        x_best = sample_uniform_in_bounds(rng, bounds)
    else:
        x_best = np.asarray(x0, dtype=float)
        if not np.all((x_best >= bounds[:, 0]) & (x_best <= bounds[:, 1])):
            raise ConfigError("x0 must lie inside the problem bounds")
    # Robust scores penalize the estimator's standard error, so a value known
    # from few samples must look better by a margin before it can displace a
    # value confirmed with many.
    weight = config.robust_weight
    mean, se = obj.estimate_mean(x_best, rng, config.confirm_samples)
    best_std = float(se * np.sqrt(config.confirm_samples))
    best_score = robust_score(float(mean), float(se), weight)
    best_mean = float(mean)
    trace = [TracePoint(0, best_mean, best_std, spent(), "init")]
    accepted_scores = [best_score]

    confirm_final = config.confirm_samples if config.confirm_final is None else config.confirm_final
    sigma = obj.noise.effective_sigma

    def confirm_for(r: float) -> int:
        if config.confirm_width > 0.0:
            want = math.ceil((config.confirm_width * sigma / r) ** 2)
            return int(np.clip(want, config.confirm_samples, confirm_final))
        # Two-phase fallback: base sampling until the radius floor, then the
        # polish count, which must pin values down near the noise floor.
        if r <= floor0 * (1.0 + 1e-9):
            return confirm_final
        return config.confirm_samples

    radius_init = radius
    hold_streak = 0
    floor_accepts: list[np.ndarray] = []
    clouds: list[tuple[np.ndarray, np.ndarray]] = []  # floor-stage samples for the surrogate
    pool: list[list] = []  # [x, n, pooled mean, pooled M2] per confirmed floor point
    floor_stage = 0
    stage = 0
    while stage < config.max_stages:
        at_floor = radius <= floor0 * (1.0 + 1e-9)
        confirm = confirm_for(radius)
        local_method = config.local
        local_budget = config.local_budget
        if at_floor:
            if config.local_final is not None:
                local_method = config.local_final
            if config.local_budget_final is not None:
                local_budget = config.local_budget_final
        local_samples = config.fa.n_samples if local_method == "fa" else config.nm.n_samples
        if at_floor and config.local_samples_final is not None:
            local_samples = config.local_samples_final
        if local_method == "fa":
            min_local = config.fa.n * local_samples
        else:
            min_local = (obj.problem.dim + 1) * local_samples
        runs_local = local_budget >= min_local
        n_extra = 0  # cheap candidates beyond the walk point and the local result
        if runs_local and local_method == "fa" and config.centroid_top >= 2 \
                and config.fa.n >= config.centroid_top:
            n_extra += 1
        if runs_local and local_method == "fa" and config.surrogate is not None and at_floor:
            n_extra += 1
        if config.average_accepts and len(floor_accepts) >= 2:
            n_extra += 1
        n_cands = 1 + n_extra + (1 if runs_local else 0)
        if config.select_samples > 0 and n_cands > 1:
            sel_cost = n_cands * config.select_samples
        else:
            sel_cost = (1 + n_extra) * config.walk_samples
        stage_cost = (local_budget if runs_local else 0) + sel_cost + confirm
        if config.max_evals is not None and spent() + stage_cost > config.max_evals:
            break
        stage += 1

        origin = x_best
        if config.walk_origin == "floor-mean" and len(floor_accepts) >= 2:
            # Accepted polish points scatter around the optimum, so their
            # running mean drifts toward it faster than any single accept;
            # recentring the ball there needs no verdict to pay off.
            origin = np.mean(np.stack(floor_accepts), axis=0)
        walk_x = levy_walk_point(rng, origin, bounds, walk_config(radius))
        raw = [(walk_x, "walk")]
        local_claim = None

        sub = _local_search(obj, config, local_method, rng, walk_x, radius,
                            local_budget, local_samples)
        if sub is not None:
            raw.append((sub.best_x, "local"))
            local_claim = (sub.best_mean, sub.best_std / np.sqrt(local_samples),
                           float(local_samples))
            pop = sub.extra.get("population")
            if config.centroid_top >= 2 and pop is not None and len(pop) >= config.centroid_top:
                # Noise in ranking the swarm largely averages out of the mean
                # of its best few members, and on a locally convex objective
                # that mean beats the members themselves.
                order = np.argsort(sub.extra["means"], kind="stable")
                raw.append((pop[order[:config.centroid_top]].mean(axis=0), "centroid"))
            if config.surrogate is not None and at_floor and pop is not None:
                clouds.append((pop, sub.extra["means"]))
                del clouds[:-config.surrogate_stages]
                model_x = _surrogate_point(config.surrogate, clouds, walk_x, radius)
                if model_x is not None:
                    raw.append((np.clip(model_x, bounds[:, 0], bounds[:, 1]), "model"))
        if config.average_accepts and len(floor_accepts) >= 2:
            # Accepted floor-phase points scatter around the optimum, so their
            # running mean is a steadily sharpening guess at it.
            raw.append((np.mean(np.stack(floor_accepts), axis=0), "mean"))

        if config.select_samples > 0 and len(raw) > 1:
            # Candidate claims come from very different amounts of selection
            # (the local result is the best of many draws); a fresh short
            # measurement of each makes the comparison fair.
            candidates = []
            for x, tag in raw:
                m, se = obj.estimate_mean(x, rng, config.select_samples)
                candidates.append((x, float(m), float(se),
                                   float(config.select_samples), tag))
        else:
            candidates = []
            for x, tag in raw:
                if tag == "local":
                    m, se, n = local_claim
                    candidates.append((x, float(m), float(se), n, tag))
                else:
                    m, se = obj.estimate_mean(x, rng, config.walk_samples)
                    candidates.append((x, float(m), float(se),
                                       float(config.walk_samples), tag))

        pick_from = candidates
        if at_floor and config.pick_final is not None:
            # The score race rewards whichever candidate carries the most
            # selection bias (the local result is a min over many draws), so
            # polish stages may instead pin the confirmation on one kind.
            forced = [c for c in candidates if c[4] == config.pick_final]
            if forced:
                pick_from = forced
        cand_x, _, _, _, tag = min(
            pick_from, key=lambda c: robust_score(c[1], c[2], weight)
        )

        if config.pool_floor and at_floor:
            # Confirmation samples accumulate per point instead of being
            # thrown away with each verdict, so measurement luck washes out
            # of repeatedly probed points.  Alternate floor stages between
            # entering the new candidate and topping up the most promising
            # pooled point (lowest mean minus one standard error).
            floor_stage += 1
            if floor_stage % 2 == 0 and pool:
                k = min(range(len(pool)),
                        key=lambda i: pool[i][2] - _pool_se(pool[i]))
                tag = "refine"
            else:
                pool.append([np.asarray(cand_x, dtype=float), 0, 0.0, 0.0])
                k = len(pool) - 1
            m, se = obj.estimate_mean(pool[k][0], rng, confirm)
            _pool_merge(pool[k], float(m), float(se), confirm)
            cand_x = pool[k][0]
            conf_mean = pool[k][2]
            conf_se = _pool_se(pool[k])
            conf_std = float(conf_se * np.sqrt(pool[k][1]))
        else:
            n_gate = min(int(round(confirm * config.confirm_gate)), confirm - 1)
            if n_gate >= 1:
                # Screening slice: a candidate whose interim score already
                # loses to the incumbent is dropped for the slice's cost
                # alone, and a measurement fluke has to repeat across two
                # independent batches before it can displace the incumbent.
                m1, se1 = obj.estimate_mean(cand_x, rng, n_gate)
                entry = [cand_x, n_gate, float(m1),
                         float(se1 * se1) * n_gate * (n_gate - 1)]
                if robust_score(float(m1), float(se1), weight) < best_score:
                    n_rest = confirm - n_gate
                    m2, se2 = obj.estimate_mean(cand_x, rng, n_rest)
                    _pool_merge(entry, float(m2), float(se2), n_rest)
                conf_mean = entry[2]
                conf_se = _pool_se(entry)
                conf_std = float(conf_se * np.sqrt(entry[1]))
            else:
                conf_mean, conf_se = obj.estimate_mean(cand_x, rng, confirm)
                conf_std = float(conf_se * np.sqrt(confirm))
        score = robust_score(float(conf_mean), float(conf_se), weight)

        accepted = score < best_score
        if accepted:
            moved = float(np.linalg.norm(cand_x - x_best))
            gained = best_score - score
            x_best = np.asarray(cand_x, dtype=float)
            best_mean, best_std, best_score = float(conf_mean), conf_std, score
            trace.append(TracePoint(stage, best_mean, best_std, spent(), tag))
            accepted_scores.append(best_score)
            if at_floor:
                floor_accepts.append(x_best.copy())
                # Each accepted polish stage recenters the ball on a better
                # incumbent, which is what makes probing a finer scale safe.
                floor *= config.floor_shrink
            hold_streak = 0
            small = moved if config.stop_on == "position" else gained
            if small < config.outer_tolerance:
                break
        else:
            trace.append(TracePoint(stage, best_mean, best_std, spent(), "hold"))
            hold_streak += 1

        # A long run of rejected stages means this scale is played out: reset
        # the ball to its initial radius and explore afresh from the incumbent
        # (the score ratchet keeps whatever was already won).
        shrink = config.radius_shrink
        if config.radius_shrink_fine is not None \
                and radius <= config.radius_fine_frac * mean_width:
            # Below the interesting basin scale the ladder is just commuting
            # to the floor, so it may as well take bigger steps down.
            shrink = config.radius_shrink_fine
        if config.restart_after is not None and hold_streak >= config.restart_after:
            radius = radius_init
        elif config.shrink_on == "step":
            if accepted:
                # Size the next ball off the accepted move itself: a long step
                # means the optimum is still far and the scale should persist,
                # a short one means it is close and the ball can close in.
                # Accepts therefore never let the probing scale outrun the
                # accuracy actually attained.  Isolated rejections are routine
                # while progress flows, so only a streak of them (the scale is
                # exhausted) contracts the ball toward a finer one.
                radius = max(min(radius, config.step_radius_frac * moved), floor)
            elif hold_streak >= config.hold_grace:
                radius = max(radius * shrink, floor)
        elif config.shrink_on == "stage" or accepted:
            # With shrink_on="accept" the ball only contracts once a stage has
            # actually improved the incumbent.
            radius = max(radius * shrink, floor)
        if config.stall_stages is not None and hold_streak >= config.stall_stages:
            break

    return OptimizationResult(x_best, best_mean, best_std, spent(), stage, trace,
                              extra={"accepted_scores": accepted_scores})
