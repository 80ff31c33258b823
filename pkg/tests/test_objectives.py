"""Benchmark functions, reward convention, and evaluation accounting."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pgpe.objectives import OBJECTIVE_FUNCTIONS, Objective, rastrigin, sphere, surface_grid

points = arrays(
    np.float64,
    st.integers(min_value=1, max_value=12),
    elements=st.floats(min_value=-10, max_value=10),
)


class TestSphere:
    def test_optimum(self):
        assert sphere(np.zeros(7)) == 0.0

    def test_hand_values(self):
        assert sphere(np.array([3.0, 4.0])) == pytest.approx(25.0, rel=1e-15)
        assert sphere(np.ones(100)) == pytest.approx(100.0, rel=1e-15)

    @settings(max_examples=200, deadline=None)
    @given(theta=points)
    def test_even(self, theta):
        assert sphere(-theta) == pytest.approx(sphere(theta), rel=1e-12, abs=1e-12)


class TestRastrigin:
    def test_optimum(self):
        assert rastrigin(np.zeros(10)) == pytest.approx(0.0, abs=1e-12)

    def test_all_ones(self):
        assert rastrigin(np.ones(10)) == pytest.approx(10.0, rel=1e-9)

    def test_half_step(self):
        assert rastrigin(np.array([0.5, 0.0])) == pytest.approx(20.25, rel=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(theta=points)
    def test_even(self, theta):
        assert rastrigin(-theta) == pytest.approx(rastrigin(theta), rel=1e-12, abs=1e-9)

    @settings(max_examples=200, deadline=None)
    @given(theta=points)
    def test_oscillation_bounded(self, theta):
        d = theta.size
        assert abs(rastrigin(theta) - sphere(theta)) <= 20.0 * d + 1e-9

    def test_nonnegative_on_grid(self):
        xs = np.linspace(-5.12, 5.12, 41)
        vals = np.array([rastrigin(np.array([x, y])) for x in xs for y in xs])
        assert vals.min() >= -1e-12
        assert rastrigin(np.zeros(2)) == pytest.approx(0.0, abs=1e-12)


class TestObjective:
    def test_registry(self):
        assert set(OBJECTIVE_FUNCTIONS) == {"sphere", "rastrigin"}

    def test_unknown_name_rejected(self):
        with pytest.raises(ValueError):
            Objective("rosenbrock", 2)

    def test_bad_dim_rejected(self):
        with pytest.raises(ValueError):
            Objective("sphere", 0)

    def test_counter_increments_once_per_evaluation(self):
        obj = Objective("sphere", 3)
        assert obj.n_evals == 0
        for k in range(5):
            obj.evaluate(np.zeros(3))
            assert obj.n_evals == k + 1

    def test_reward_is_negated_value(self):
        obj = Objective("rastrigin", 2)
        theta = np.array([0.5, 0.0])
        assert obj.reward(theta) == -obj.evaluate(theta)
        assert obj.n_evals == 2

    def test_shape_mismatch_rejected(self):
        obj = Objective("sphere", 3)
        with pytest.raises(ValueError):
            obj.evaluate(np.zeros(4))


class TestSurfaceGrid:
    def test_degenerate_range(self):
        rows = surface_grid(Objective("rastrigin", 2), 0.0, 4)
        assert rows.shape == (16, 3)
        np.testing.assert_allclose(rows[:, 2], 0.0, atol=1e-12)

    def test_sphere_corners(self):
        rows = surface_grid(Objective("sphere", 2), 1.0, 3)
        assert rows.shape == (9, 3)
        assert rows[0][2] == pytest.approx(2.0)   # (-1,-1)
        assert rows[-1][2] == pytest.approx(2.0)  # (1,1)
        assert rows[4][2] == pytest.approx(0.0)   # (0,0)

    def test_rastrigin_corner(self):
        rows = surface_grid(Objective("rastrigin", 2), 1.0, 3)
        assert rows[-1][2] == pytest.approx(2.0, rel=1e-9)

    def test_row_major_order(self):
        rows = surface_grid(Objective("sphere", 2), 1.0, 3)
        # x varies slowest, y fastest
        np.testing.assert_allclose(rows[:3, 0], -1.0)
        np.testing.assert_allclose(rows[:3, 1], [-1.0, 0.0, 1.0])

    def test_counter_charged_per_node(self):
        obj = Objective("sphere", 2)
        surface_grid(obj, 1.0, 5)
        assert obj.n_evals == 25

    def test_resolution_too_small_rejected(self):
        with pytest.raises(ValueError):
            surface_grid(Objective("sphere", 2), 1.0, 1)

    def test_non_2d_rejected(self):
        with pytest.raises(ValueError):
            surface_grid(Objective("sphere", 3), 1.0, 3)

    def test_negative_range_rejected(self):
        with pytest.raises(ValueError):
            surface_grid(Objective("sphere", 2), -1.0, 3)
