"""Seeded runs, aggregation, grid search, and the scaling study."""

import dataclasses

import numpy as np
import pytest

from pgpe.harness import (
    AggregateStats,
    ConvergenceRecord,
    GridSpec,
    RunConfig,
    aggregate_records,
    default_alpha_grid,
    evaluation_grid,
    grid_search,
    grid_start_for,
    rng_for_run,
    run_batch,
    run_single,
    scaling_study,
)
from pgpe.updates import Variant


def config(**overrides):
    base = dict(
        variant="SyS",
        objective="sphere",
        dim=2,
        alpha_mu=0.05,
        alpha_sigma=0.02,
        mu0_range=1.0,
        sigma0=1.0,
        max_evaluations=400,
        target_reward=-0.01,
        base_seed=5,
        run_count=4,
    )
    base.update(overrides)
    return RunConfig(**base)


def record(run_id, evals, best):
    evals = np.asarray(evals, dtype=np.int64)
    best = np.asarray(best, dtype=float)
    return ConvergenceRecord(
        run_id=run_id,
        evaluations=evals,
        best_reward=best,
        update_reward=best.copy(),
        mean_sigma=np.ones_like(best),
        evaluations_to_target=None,
    )


class TestRunConfigValidation:
    def test_defaults_round(self):
        cfg = config()
        assert cfg.variant is Variant.SYS
        assert cfg.meta.alpha_mu == 0.05

    def test_bad_values_rejected(self):
        with pytest.raises(ValueError):
            config(run_count=0)
        with pytest.raises(ValueError):
            config(max_evaluations=3)
        with pytest.raises(ValueError):
            config(sigma0=0.0)
        with pytest.raises(ValueError):
            config(base_seed=-1)
        with pytest.raises(ValueError):
            config(mu0_range=-0.5)
        with pytest.raises(ValueError):
            config(grid_points=1)
        with pytest.raises(ValueError):
            config(variant="NotAVariant")


class TestRunSingle:
    def test_deterministic_replay(self):
        cfg = config()
        a = run_single(cfg, 3)
        b = run_single(cfg, 3)
        np.testing.assert_array_equal(a.evaluations, b.evaluations)
        np.testing.assert_array_equal(a.best_reward, b.best_reward)
        np.testing.assert_array_equal(a.mean_sigma, b.mean_sigma)
        assert a.evaluations_to_target == b.evaluations_to_target

    def test_distinct_runs_differ(self):
        cfg = config()
        a = run_single(cfg, 0)
        b = run_single(cfg, 1)
        assert not np.array_equal(a.best_reward, b.best_reward)

    def test_sys_update_count(self):
        cfg = config(max_evaluations=100)
        rec = run_single(cfg, 0)
        assert rec.evaluations.size == 50
        assert rec.evaluations[-1] == 100

    def test_evals_per_update_by_variant(self):
        for variant, step in (("PGPE", 1), ("SyS", 2), ("SupSyS", 4), ("PGPE4smp", 4)):
            rec = run_single(config(variant=variant, max_evaluations=40), 0)
            assert np.all(np.diff(rec.evaluations) == step), variant
            assert rec.evaluations[0] == step

    def test_supif_variable_accounting(self):
        rec = run_single(config(variant="SupIf", max_evaluations=200), 0)
        steps = np.diff(np.concatenate([[0], rec.evaluations]))
        assert set(np.unique(steps)) <= {1, 2, 4}
        assert rec.evaluations[-1] >= 200

    def test_best_reward_monotone(self):
        for variant in ("PGPE", "SyS", "SupSyS", "PGPE4smp", "SupIf"):
            rec = run_single(config(variant=variant), 0)
            assert np.all(np.diff(rec.best_reward) >= 0), variant

    def test_evaluations_strictly_increasing(self):
        rec = run_single(config(variant="SupIf"), 0)
        assert np.all(np.diff(rec.evaluations) > 0)

    def test_target_detection(self):
        cfg = config(max_evaluations=4000)
        rec = run_single(cfg, 0)
        if rec.evaluations_to_target is not None:
            k = np.searchsorted(rec.evaluations, rec.evaluations_to_target)
            assert rec.best_reward[k] >= cfg.target_reward
            assert np.all(rec.best_reward[:k] < cfg.target_reward)

    def test_sphere_d2_convergence_bar(self):
        # pilot-derived: 82 of 100 seeded runs cross -1e-2 within 1e4
        # evaluations at these steps; premature sigma collapse claims
        # the rest, so the bar sits at 78 with a small noise margin
        cfg = config(
            alpha_mu=0.1,
            alpha_sigma=0.1,
            max_evaluations=10_000,
            target_reward=-1e-2,
            base_seed=7,
            run_count=100,
        )
        result = run_batch(cfg)
        reached = sum(1 for rec in result.records if rec.best_reward[-1] > -1e-2)
        assert reached >= 78


class TestRngForRun:
    def test_reproducible(self):
        a = rng_for_run(9, 2).standard_normal(4)
        b = rng_for_run(9, 2).standard_normal(4)
        np.testing.assert_array_equal(a, b)

    def test_streams_independent(self):
        a = rng_for_run(9, 0).standard_normal(4)
        b = rng_for_run(9, 1).standard_normal(4)
        assert not np.array_equal(a, b)


class TestEvaluationGrid:
    def test_bounds_and_monotonicity(self):
        cfg = config(variant="SupSyS", max_evaluations=1000, grid_points=64)
        grid = evaluation_grid(cfg)
        assert grid[0] == grid_start_for(Variant.SUPSYS) == 4
        assert grid[-1] == 1000
        assert np.all(np.diff(grid) > 0)
        assert grid.dtype == np.int64

    def test_start_by_variant(self):
        assert grid_start_for(Variant.PGPE) == 1
        assert grid_start_for(Variant.SYS) == 2
        assert grid_start_for(Variant.PGPE4SMP) == 4
        assert grid_start_for(Variant.SUPIF) == 1


class TestAggregation:
    def test_single_run_zero_std(self):
        result = run_batch(config(run_count=1))
        np.testing.assert_array_equal(result.aggregate.std_best_reward, 0.0)
        assert result.aggregate.run_count == 1

    def test_hand_mean_and_population_std(self):
        recs = [record(0, [2, 4], [1.0, 1.0]), record(1, [2, 4], [3.0, 3.0])]
        agg = aggregate_records(recs, np.array([2, 3, 4]), target_reward=2.0)
        np.testing.assert_allclose(agg.mean_best_reward, 2.0)
        np.testing.assert_allclose(agg.std_best_reward, 1.0)  # divide by N
        np.testing.assert_allclose(agg.success_rate, 0.5)

    def test_step_function_interpolation(self):
        recs = [record(0, [2, 4, 6], [-3.0, -2.0, -1.0])]
        agg = aggregate_records(recs, np.array([2, 3, 4, 5, 6]), target_reward=0.0)
        np.testing.assert_allclose(agg.mean_best_reward, [-3, -3, -2, -2, -1])

    def test_grid_point_before_first_checkpoint_clamps(self):
        recs = [record(0, [4, 8], [-5.0, -1.0])]
        agg = aggregate_records(recs, np.array([2, 4, 8]), target_reward=0.0)
        np.testing.assert_allclose(agg.mean_best_reward, [-5, -5, -1])

    def test_order_independence(self):
        cfg = config(run_count=6)
        result = run_batch(cfg)
        grid = evaluation_grid(cfg)
        shuffled = list(reversed(result.records))
        agg2 = aggregate_records(shuffled, grid, cfg.target_reward)
        np.testing.assert_array_equal(result.aggregate.mean_best_reward, agg2.mean_best_reward)
        np.testing.assert_array_equal(result.aggregate.std_best_reward, agg2.std_best_reward)

    def test_median_evals_to_target_with_nonreachers(self):
        recs = [record(0, [2], [0.5]), record(1, [2], [0.5]), record(2, [2], [-1.0])]
        recs[0].evaluations_to_target = 10
        recs[1].evaluations_to_target = 20
        agg = aggregate_records(recs, np.array([2]), target_reward=0.0)
        assert agg.median_evaluations_to_target == 20.0
        recs[1].evaluations_to_target = None
        agg = aggregate_records(recs, np.array([2]), target_reward=0.0)
        assert agg.median_evaluations_to_target == np.inf

    def test_mean_updates_axis(self):
        recs = [record(0, [2, 4, 6], [-3.0, -2.0, -1.0])]
        agg = aggregate_records(recs, np.array([2, 5, 6]), target_reward=0.0)
        np.testing.assert_allclose(agg.mean_updates, [1, 2, 3])

    def test_batch_reproducible(self):
        a = run_batch(config())
        b = run_batch(config())
        np.testing.assert_array_equal(a.aggregate.mean_best_reward, b.aggregate.mean_best_reward)

    def test_workers_match_serial(self):
        cfg = config(run_count=4, max_evaluations=200)
        serial = run_batch(cfg, workers=1)
        parallel = run_batch(cfg, workers=2)
        np.testing.assert_array_equal(
            serial.aggregate.mean_best_reward, parallel.aggregate.mean_best_reward
        )


class TestGridSpecValidation:
    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            GridSpec(alpha_mu=[], alpha_sigma=[0.1])

    def test_non_increasing_rejected(self):
        with pytest.raises(ValueError):
            GridSpec(alpha_mu=[0.1, 0.1], alpha_sigma=[0.1])
        with pytest.raises(ValueError):
            GridSpec(alpha_mu=[0.2, 0.1], alpha_sigma=[0.1])

    def test_nonpositive_rejected(self):
        with pytest.raises(ValueError):
            GridSpec(alpha_mu=[0.0, 0.1], alpha_sigma=[0.1])

    def test_bad_metric_rejected(self):
        with pytest.raises(ValueError):
            GridSpec(alpha_mu=[0.1], alpha_sigma=[0.1], metric="wall_clock")

    def test_default_alpha_grid_shape(self):
        grid = default_alpha_grid()
        assert grid[0] == pytest.approx(1e-4)
        assert grid[-1] == pytest.approx(1.0)
        assert len(grid) == 9
        ratios = [b / a for a, b in zip(grid, grid[1:])]
        np.testing.assert_allclose(ratios, 10.0**0.5, rtol=1e-12)


class TestGridSearch:
    def test_single_cell(self):
        spec = GridSpec(alpha_mu=[0.05], alpha_sigma=[0.02], runs_per_cell=2)
        result = grid_search(spec, config(max_evaluations=100))
        assert result.best_alpha_mu == 0.05
        assert result.best_alpha_sigma == 0.02
        assert len(result.table) == 1

    def test_planted_optimum(self):
        spec = GridSpec(alpha_mu=[0.05, 0.1, 0.2], alpha_sigma=[0.1, 0.2, 0.4])
        result = grid_search(
            spec,
            config(),
            score_fn=lambda amu, asig: -((amu - 0.1) ** 2) - (asig - 0.2) ** 2,
        )
        assert result.best_alpha_mu == 0.1
        assert result.best_alpha_sigma == 0.2
        assert result.metric == "mean_final_reward"

    def test_tie_breaks_lexicographically_smaller(self):
        spec = GridSpec(alpha_mu=[0.1, 0.2], alpha_sigma=[0.1, 0.2])
        result = grid_search(spec, config(), score_fn=lambda amu, asig: 0.0)
        assert (result.best_alpha_mu, result.best_alpha_sigma) == (0.1, 0.1)

    def test_fallback_when_target_unreachable(self):
        spec = GridSpec(alpha_mu=[0.01, 0.05], alpha_sigma=[0.01], runs_per_cell=2)
        template = config(max_evaluations=40, target_reward=0.0)  # exact optimum: unreachable
        result = grid_search(spec, template)
        assert result.fell_back
        assert result.metric == "mean_final_reward"

    def test_table_covers_full_cross_product(self):
        spec = GridSpec(alpha_mu=[0.1, 0.2, 0.4], alpha_sigma=[0.1, 0.2], runs_per_cell=1)
        result = grid_search(spec, config(max_evaluations=40))
        assert len(result.table) == 6
        cells = [(c.alpha_mu, c.alpha_sigma) for c in result.table]
        assert cells == sorted(cells)  # lexicographic enumeration order


class TestScalingStudy:
    def test_planted_inverse_dim_slope(self):
        dims = [2, 4, 8]

        def make_grid(d):
            return GridSpec(alpha_mu=[0.5 / d, 1.0 / d, 2.0 / d], alpha_sigma=[1.0 / d, 2.0 / d, 4.0 / d])

        def make_template(d):
            return config(dim=d)

        def score(d, amu, asig):
            return -((amu - 1.0 / d) ** 2) - (asig - 2.0 / d) ** 2

        result = scaling_study(dims, make_grid, make_template, score_fn=score)
        assert result.slope_alpha_mu == pytest.approx(-1.0, abs=1e-6)
        assert result.slope_alpha_sigma == pytest.approx(-1.0, abs=1e-6)
        assert [row.dim for row in result.rows] == dims

    def test_single_dim_slope_none(self):
        result = scaling_study(
            [4],
            lambda d: GridSpec(alpha_mu=[0.1], alpha_sigma=[0.1]),
            lambda d: config(dim=d),
            score_fn=lambda d, amu, asig: 1.0,
        )
        assert result.slope_alpha_mu is None
        assert result.slope_alpha_sigma is None

    def test_empty_dims_rejected(self):
        with pytest.raises(ValueError):
            scaling_study([], lambda d: None, lambda d: None)
