"""Seeded experiment execution, aggregation, and meta-parameter search.

A *run* is one seeded optimization trajectory; a *batch* is ``run_count``
independent runs of the same configuration whose best-reward curves are
aggregated (mean/std across runs) on a common evaluation grid.  Grid
search scans step-size pairs, and the scaling study repeats the grid
search across problem dimensions.

Reproducibility contract: run ``i`` of a batch draws from
``numpy.random.default_rng(numpy.random.SeedSequence((base_seed, i)))``
(PCG64).  Each run consumes, in order: one ``uniform(-mu0_range,
mu0_range, dim)`` draw for the initial mean, then one
``standard_normal(dim)`` draw per perturbation.  Identical
(base_seed, run_index) pairs therefore replay bit-identical runs, and
batch results do not depend on execution order or worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .objectives import Objective
from .sampling import Hypothesis, draw_perturbation, quad_from_eps
from .updates import (
    BaselineState,
    MetaParams,
    Variant,
    apply_update,
    pgpe4smp_update,
    pgpe_update,
    supif_step,
    supsys_update,
    sys_update,
)


@dataclass
class RunConfig:
    """Everything needed to reproduce a batch of runs."""

    variant: Variant
    objective: str
    dim: int
    alpha_mu: float
    alpha_sigma: float
    mu0_range: float
    sigma0: float
    max_evaluations: int
    target_reward: float
    base_seed: int
    run_count: int
    sigma_floor: float = 1e-10
    baseline_kind: str = "decaying"
    baseline_gamma: float = 0.1
    baseline_window: int = 10
    grid_points: int = 256
    label: str | None = None

    def __post_init__(self):
        self.variant = Variant(self.variant)
        if self.run_count < 1:
            raise ValueError("run_count must be >= 1")
        if self.max_evaluations < 4:
            raise ValueError("max_evaluations must be >= 4")
        if self.sigma0 <= 0:
            raise ValueError("sigma0 must be strictly positive")
        if self.mu0_range < 0:
            raise ValueError("mu0_range must be non-negative")
        if self.base_seed < 0:
            raise ValueError("base_seed must be non-negative")
        if self.grid_points < 2:
            raise ValueError("grid_points must be >= 2")

    @property
    def meta(self) -> MetaParams:
        return MetaParams(
            alpha_mu=self.alpha_mu,
            alpha_sigma=self.alpha_sigma,
            variant=self.variant,
            sigma_floor=self.sigma_floor,
        )

    def make_baseline(self) -> BaselineState:
        return BaselineState(
            kind=self.baseline_kind,
            gamma=self.baseline_gamma,
            window=self.baseline_window,
        )

    def display_label(self) -> str:
        return self.label if self.label is not None else self.variant.value


@dataclass
class ConvergenceRecord:
    """Per-update trace of one seeded run.

    Checkpoint ``k`` is taken after update ``k + 1``; ``evaluations`` is
    strictly increasing and ``best_reward`` non-decreasing.
    """

    run_id: int
    evaluations: np.ndarray
    best_reward: np.ndarray
    update_reward: np.ndarray
    mean_sigma: np.ndarray
    evaluations_to_target: int | None


@dataclass
class AggregateStats:
    """Cross-run statistics on a common evaluation grid.

    ``success_rate[k]`` is the fraction of runs whose best reward had
    reached the target by grid point k; ``mean_updates[k]`` the mean
    number of completed updates, giving a per-update x-axis.  The std
    is the population convention (divide by N).
    """

    evaluations: np.ndarray
    mean_best_reward: np.ndarray
    std_best_reward: np.ndarray
    success_rate: np.ndarray
    mean_updates: np.ndarray
    run_count: int
    final_success_rate: float
    median_evaluations_to_target: float  # inf when at least half the runs never reach


@dataclass
class BatchResult:
    config: RunConfig
    records: list[ConvergenceRecord]
    aggregate: AggregateStats


def rng_for_run(base_seed: int, run_index: int) -> np.random.Generator:
    """Independent, reproducible stream for one run of a batch."""
    return np.random.default_rng(np.random.SeedSequence((base_seed, run_index)))


def grid_start_for(variant: Variant) -> int:
    """First checkpoint's evaluation count: 1, 2 or 4 depending on variant."""
    if variant in (Variant.PGPE, Variant.SUPIF):
        return 1
    if variant is Variant.SYS:
        return 2
    return 4


def evaluation_grid(config: RunConfig) -> np.ndarray:
    """Common x-axis: integer evaluation counts from the first checkpoint."""
    start = grid_start_for(config.variant)
    pts = np.linspace(start, config.max_evaluations, config.grid_points)
    return np.unique(np.round(pts).astype(np.int64))


def run_single(config: RunConfig, run_index: int) -> ConvergenceRecord:
    """Execute one seeded run; loops updates until the evaluation budget.

    The final update may overshoot ``max_evaluations`` by up to 3
    evaluations for the SupIf variant (branch size is not known before
    the step is taken).  Overflowing cells of a step-size grid are
    expected to produce non-finite rewards; arithmetic warnings are
    suppressed and such runs simply never improve their best reward.
    """
    rng = rng_for_run(config.base_seed, run_index)
    mu = rng.uniform(-config.mu0_range, config.mu0_range, config.dim)
    sigma = np.full(config.dim, float(config.sigma0))
    hyp = Hypothesis(mu=mu, sigma=sigma)
    meta = config.meta
    baseline = config.make_baseline()
    objective = Objective(config.objective, config.dim)
    variant = config.variant

    evals_trace: list[int] = []
    best_trace: list[float] = []
    reward_trace: list[float] = []
    sigma_trace: list[float] = []
    best = -np.inf
    evaluations_to_target: int | None = None

    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        while objective.n_evals < config.max_evaluations:
            if variant is Variant.PGPE:
                theta = hyp.mu + draw_perturbation(rng, hyp)
                r = objective.reward(theta)
                report, baseline = pgpe_update(hyp, theta, r, baseline, meta)
            elif variant is Variant.SYS:
                eps = draw_perturbation(rng, hyp)
                r_plus = objective.reward(hyp.mu + eps)
                r_minus = objective.reward(hyp.mu - eps)
                report, baseline = sys_update(hyp, eps, r_plus, r_minus, baseline, meta)
            elif variant is Variant.SUPSYS:
                quad = quad_from_eps(hyp, draw_perturbation(rng, hyp))
                quad.set_rewards(
                    objective.reward(quad.theta_pp),
                    objective.reward(quad.theta_mp),
                    objective.reward(quad.theta_pm),
                    objective.reward(quad.theta_mm),
                )
                report = supsys_update(hyp, quad, meta)
            elif variant is Variant.PGPE4SMP:
                eps1 = draw_perturbation(rng, hyp)
                pair1 = (eps1, objective.reward(hyp.mu + eps1), objective.reward(hyp.mu - eps1))
                eps2 = draw_perturbation(rng, hyp)
                pair2 = (eps2, objective.reward(hyp.mu + eps2), objective.reward(hyp.mu - eps2))
                report, baseline = pgpe4smp_update(hyp, pair1, pair2, baseline, meta)
            else:  # SupIf
                report, baseline = supif_step(hyp, rng, objective, baseline, meta)

            hyp = apply_update(hyp, report, meta)

            for r in report.rewards_seen:
                if r > best:  # NaN-safe: comparison is False for NaN
                    best = r
            evals_trace.append(objective.n_evals)
            best_trace.append(best)
            reward_trace.append(sum(report.rewards_seen) / len(report.rewards_seen))
            sigma_trace.append(float(hyp.sigma.mean()))
            if evaluations_to_target is None and best >= config.target_reward:
                evaluations_to_target = objective.n_evals

    return ConvergenceRecord(
        run_id=run_index,
        evaluations=np.asarray(evals_trace, dtype=np.int64),
        best_reward=np.asarray(best_trace),
        update_reward=np.asarray(reward_trace),
        mean_sigma=np.asarray(sigma_trace),
        evaluations_to_target=evaluations_to_target,
    )


def aggregate_records(
    records: list[ConvergenceRecord],
    grid: np.ndarray,
    target_reward: float,
) -> AggregateStats:
    """Step-interpolate each run's best-reward curve onto ``grid`` and
    average across runs.

    A grid point maps to the last checkpoint at or before it; grid
    points before a run's first checkpoint clamp to that first
    checkpoint.  The result is independent of record order.
    """
    records = sorted(records, key=lambda rec: rec.run_id)
    n = len(records)
    best = np.empty((n, grid.size))
    updates = np.empty((n, grid.size))
    for k, rec in enumerate(records):
        idx = np.searchsorted(rec.evaluations, grid, side="right") - 1
        idx = np.maximum(idx, 0)
        best[k] = rec.best_reward[idx]
        updates[k] = idx + 1
    success = best >= target_reward

    e2t = np.array(
        [np.inf if rec.evaluations_to_target is None else rec.evaluations_to_target for rec in records]
    )
    median_e2t = float(np.median(e2t)) if n else np.inf
    return AggregateStats(
        evaluations=grid,
        mean_best_reward=best.mean(axis=0),
        std_best_reward=best.std(axis=0),
        success_rate=success.mean(axis=0),
        mean_updates=updates.mean(axis=0),
        run_count=n,
        final_success_rate=float(success[:, -1].mean()),
        median_evaluations_to_target=median_e2t,
    )


def _run_single_star(args: tuple[RunConfig, int]) -> ConvergenceRecord:
    return run_single(*args)


def run_batch(config: RunConfig, workers: int | None = None) -> BatchResult:
    """Execute all runs of a config and aggregate them.

    ``workers`` > 1 distributes runs over processes; results are merged
    by run index, so the output is identical to a serial execution.
    """
    if workers is None:
        workers = 1
    indices = range(config.run_count)
    if workers > 1 and config.run_count > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_single_star, [(config, i) for i in indices], chunksize=4))
    else:
        records = [run_single(config, i) for i in indices]
    grid = evaluation_grid(config)
    return BatchResult(
        config=config,
        records=records,
        aggregate=aggregate_records(records, grid, config.target_reward),
    )


# ---------------------------------------------------------------------------
# Meta-parameter grid search


def default_alpha_grid() -> list[float]:
    """Log-spaced step-size candidates, 1e-4 to 1, two points per decade."""
    return [float(10.0 ** (0.5 * k - 4.0)) for k in range(9)]


@dataclass
class GridSpec:
    """Step-size candidates (log-spaced by convention) and the cell score."""

    alpha_mu: list[float]
    alpha_sigma: list[float]
    metric: str = "median_evals_to_target"
    runs_per_cell: int = 20

    def __post_init__(self):
        for name, grid in (("alpha_mu", self.alpha_mu), ("alpha_sigma", self.alpha_sigma)):
            if len(grid) == 0:
                raise ValueError(f"{name} grid must be non-empty")
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise ValueError(f"{name} grid must be strictly increasing")
            if grid[0] <= 0:
                raise ValueError(f"{name} grid values must be positive")
        if self.metric not in ("median_evals_to_target", "mean_final_reward"):
            raise ValueError(f"unknown selection metric {self.metric!r}")
        if self.runs_per_cell < 1:
            raise ValueError("runs_per_cell must be >= 1")


@dataclass
class CellScore:
    alpha_mu: float
    alpha_sigma: float
    median_evals_to_target: float = np.inf
    mean_final_reward: float = np.nan
    final_success_rate: float = np.nan


@dataclass
class GridSearchResult:
    best_alpha_mu: float
    best_alpha_sigma: float
    metric: str        # metric actually used for selection
    fell_back: bool    # True when median metric had no finite cell
    table: list[CellScore] = field(default_factory=list)


def _cell_objective(cell: CellScore, metric: str) -> float:
    """Lower-is-better selection value for a cell under a metric."""
    if metric == "median_evals_to_target":
        return cell.median_evals_to_target
    value = cell.mean_final_reward
    return np.inf if np.isnan(value) else -value


def grid_search(
    grid: GridSpec,
    template: RunConfig,
    score_fn=None,
    workers: int | None = None,
) -> GridSearchResult:
    """Evaluate every (alpha_mu, alpha_sigma) cell and pick the best.

    Cells are scored by running ``runs_per_cell`` seeded runs each (all
    cells share the template's base_seed, so they see identical random
    streams).  Ties break toward the lexicographically smaller
    (alpha_mu, alpha_sigma).  If the median-evaluations metric finds no
    cell that ever reaches the target, selection falls back to the mean
    final reward and the result is flagged.

    ``score_fn(alpha_mu, alpha_sigma) -> float`` (higher is better)
    replaces batch execution entirely; intended for calibration tests.
    """
    table: list[CellScore] = []
    for amu in grid.alpha_mu:
        for asig in grid.alpha_sigma:
            if score_fn is not None:
                cell = CellScore(amu, asig, mean_final_reward=float(score_fn(amu, asig)))
            else:
                cfg = replace(template, alpha_mu=amu, alpha_sigma=asig, run_count=grid.runs_per_cell)
                agg = run_batch(cfg, workers=workers).aggregate
                cell = CellScore(
                    amu,
                    asig,
                    median_evals_to_target=agg.median_evaluations_to_target,
                    mean_final_reward=float(agg.mean_best_reward[-1]),
                    final_success_rate=agg.final_success_rate,
                )
            table.append(cell)

    metric = "mean_final_reward" if score_fn is not None else grid.metric
    fell_back = False
    if metric == "median_evals_to_target" and all(
        not np.isfinite(c.median_evals_to_target) for c in table
    ):
        metric = "mean_final_reward"
        fell_back = True

    best = table[0]
    best_value = _cell_objective(best, metric)
    for cell in table[1:]:  # lexicographic order; strict improvement only
        value = _cell_objective(cell, metric)
        if value < best_value:
            best, best_value = cell, value
    return GridSearchResult(
        best_alpha_mu=best.alpha_mu,
        best_alpha_sigma=best.alpha_sigma,
        metric=metric,
        fell_back=fell_back,
        table=table,
    )


# ---------------------------------------------------------------------------
# Dimension scaling study


@dataclass
class ScalingRow:
    dim: int
    best_alpha_mu: float
    best_alpha_sigma: float


@dataclass
class ScalingStudyResult:
    rows: list[ScalingRow]
    slope_alpha_mu: float | None     # least-squares slope of log(alpha) vs log(dim)
    slope_alpha_sigma: float | None
    grid_results: list[GridSearchResult] = field(default_factory=list)


def scaling_study(
    dims: list[int],
    make_grid,
    make_template,
    score_fn=None,
    workers: int | None = None,
) -> ScalingStudyResult:
    """Grid-search the best step sizes per dimension and fit log-log slopes.

    ``make_grid(dim) -> GridSpec`` and ``make_template(dim) -> RunConfig``
    define the per-dimension search; ``score_fn(dim, alpha_mu,
    alpha_sigma)`` optionally injects synthetic scores.  With a single
    dimension the slopes are None.
    """
    if len(dims) < 1:
        raise ValueError("dims must be non-empty")
    rows: list[ScalingRow] = []
    results: list[GridSearchResult] = []
    for dim in dims:
        fn = None if score_fn is None else (lambda amu, asig, _d=dim: score_fn(_d, amu, asig))
        result = grid_search(make_grid(dim), make_template(dim), score_fn=fn, workers=workers)
        results.append(result)
        rows.append(ScalingRow(dim, result.best_alpha_mu, result.best_alpha_sigma))

    if len(dims) >= 2:
        log_d = np.log([row.dim for row in rows])
        slope_mu = float(np.polyfit(log_d, np.log([row.best_alpha_mu for row in rows]), 1)[0])
        slope_sigma = float(np.polyfit(log_d, np.log([row.best_alpha_sigma for row in rows]), 1)[0])
    else:
        slope_mu = slope_sigma = None
    return ScalingStudyResult(
        rows=rows,
        slope_alpha_mu=slope_mu,
        slope_alpha_sigma=slope_sigma,
        grid_results=results,
    )


def default_workers() -> int:
    return os.cpu_count() or 1
