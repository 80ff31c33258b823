"""Benchmark objectives and evaluation accounting.

Both benchmarks are minimization problems; the optimizer maximizes
reward, so ``reward = -f``.  Every point evaluation bumps a counter so
that sample budgets can be audited exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

RASTRIGIN_AMPLITUDE = 10.0


def sphere(theta) -> float:
    """f(theta) = sum(theta_i^2); global minimum 0 at the origin."""
    theta = np.asarray(theta, dtype=float)
    return float(np.dot(theta, theta))


def rastrigin(theta) -> float:
    """f(theta) = 10 d + sum(theta_i^2 - 10 cos(2 pi theta_i)).

    Egg-crate landscape: one global minimum at the origin and a local
    optimum near every integer lattice point.  No box constraint is
    applied; points are evaluated wherever they land.
    """
    theta = np.asarray(theta, dtype=float)
    a = RASTRIGIN_AMPLITUDE
    return float(a * theta.size + np.sum(theta * theta - a * np.cos(2.0 * np.pi * theta)))


OBJECTIVE_FUNCTIONS = {"sphere": sphere, "rastrigin": rastrigin}


@dataclass
class Objective:
    """A named benchmark bound to a dimension, with an evaluation counter."""

    name: str
    dim: int
    n_evals: int = field(default=0)

    def __post_init__(self):
        if self.name not in OBJECTIVE_FUNCTIONS:
            raise ValueError(
                f"unknown objective {self.name!r}; expected one of {sorted(OBJECTIVE_FUNCTIONS)}"
            )
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        self._fn = OBJECTIVE_FUNCTIONS[self.name]

    def evaluate(self, theta) -> float:
        """Evaluate f at one point; increments the counter by exactly 1."""
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.dim,):
            raise ValueError(f"expected shape ({self.dim},), got {theta.shape}")
        self.n_evals += 1
        return self._fn(theta)

    def reward(self, theta) -> float:
        """Reward convention for the maximizing optimizer: -f(theta)."""
        return -self.evaluate(theta)


def surface_grid(objective: Objective, half_range: float, resolution: int) -> np.ndarray:
    """Tabulate a 2-D objective on [-half_range, half_range]^2.

    Returns an (resolution^2, 3) array of rows (x, y, f) in row-major
    order: x varies slowest, y fastest.  Only 2-D objectives are
    supported; resolution must be at least 2.
    """
    if objective.dim != 2:
        raise ValueError(f"surface grid requires a 2-D objective, got dim={objective.dim}")
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    if half_range < 0:
        raise ValueError("range must be non-negative")
    axis = np.linspace(-half_range, half_range, resolution)
    rows = np.empty((resolution * resolution, 3))
    k = 0
    for x in axis:
        for y in axis:
            rows[k] = (x, y, objective.evaluate(np.array([x, y])))
            k += 1
    return rows
