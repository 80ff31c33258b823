"""Gaussian search-distribution sampling with median-deviation mirroring.

The search distribution is an independent Gaussian per coordinate,
``N(mu_i, sigma_i^2)``.  Besides the usual symmetric pair ``mu +- eps``,
this module builds a second, quasi-symmetric pair ``mu +- eps*`` where
``eps*`` is ``eps`` reflected to the other side of the *median deviation*

    phi = 0.67449 * sigma,

the scale at which half of the Gaussian's mass lies closer to the mean.
Reflection across phi cannot be done in closed form without distorting
the distribution, so ``mirror`` uses a fitted piecewise-exponential
approximation whose output distribution matches the original to about
0.2% in standard deviation.  The four parameter vectors built from
``eps`` and ``eps*`` make both the mean and the scale updates of the
optimizer baseline-free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Quartile of the standard normal: P(|x| < MEDIAN_OVER_STD) = 1/2.
MEDIAN_OVER_STD = 0.67449

# Fitted constants of the mirroring approximation.
MIRROR_C1 = -0.06655
MIRROR_C2 = -0.9706
MIRROR_C3 = 0.124

# |eps| is clamped below at this fraction of phi inside mirror(); an eps
# of exactly zero would otherwise hit the pole of the a > 0 branch.
EPS_FLOOR_FACTOR = 1e-12

# mirror() floors its output magnitude at this fraction of phi so that
# far-tail inputs, whose reflection underflows, keep their sign.
OUT_FLOOR_FACTOR = 1e-300


@dataclass
class Hypothesis:
    """Current search distribution: per-coordinate mean and std deviation."""

    mu: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        self.mu = np.asarray(self.mu, dtype=float)
        self.sigma = np.asarray(self.sigma, dtype=float)
        if self.mu.ndim != 1 or self.sigma.ndim != 1:
            raise ValueError("mu and sigma must be 1-D vectors")
        if self.mu.shape != self.sigma.shape:
            raise ValueError(
                f"mu and sigma must have equal length, got {self.mu.size} != {self.sigma.size}"
            )
        if self.mu.size < 1:
            raise ValueError("hypothesis dimension must be >= 1")
        if np.any(self.sigma < 0):
            raise ValueError("sigma components must be non-negative")

    @property
    def dim(self) -> int:
        return self.mu.size

    @property
    def phi(self) -> np.ndarray:
        """Median deviation vector, derived from sigma on demand."""
        return MEDIAN_OVER_STD * self.sigma


@dataclass
class SampleQuad:
    """Four parameter samples: a symmetric pair and its mirrored pair.

    ``theta_pp = mu + eps``, ``theta_mp = mu - eps`` (original pair);
    ``theta_pm = mu + eps_star``, ``theta_mm = mu - eps_star`` (mirrored
    pair).  Rewards are ``None`` until the samples have been evaluated.
    """

    eps: np.ndarray
    eps_star: np.ndarray
    theta_pp: np.ndarray
    theta_mp: np.ndarray
    theta_pm: np.ndarray
    theta_mm: np.ndarray
    r_pp: float | None = None
    r_mp: float | None = None
    r_pm: float | None = None
    r_mm: float | None = None

    @property
    def thetas(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return self.theta_pp, self.theta_mp, self.theta_pm, self.theta_mm

    @property
    def rewards_set(self) -> bool:
        return None not in (self.r_pp, self.r_mp, self.r_pm, self.r_mm)

    def set_rewards(self, r_pp: float, r_mp: float, r_pm: float, r_mm: float) -> None:
        self.r_pp, self.r_mp, self.r_pm, self.r_mm = (
            float(r_pp), float(r_mp), float(r_pm), float(r_mm),
        )


def median_from_std(sigma):
    """Median deviation of N(0, sigma^2): phi = 0.67449 * sigma.

    Accepts a scalar or an array; negative input raises ValueError.
    """
    sigma = np.asarray(sigma, dtype=float)
    if np.any(sigma < 0):
        raise ValueError("sigma must be non-negative")
    out = MEDIAN_OVER_STD * sigma
    return float(out) if out.ndim == 0 else out


def std_from_median(phi):
    """Inverse of median_from_std: sigma = phi / 0.67449."""
    phi = np.asarray(phi, dtype=float)
    if np.any(phi < 0):
        raise ValueError("phi must be non-negative")
    out = phi / MEDIAN_OVER_STD
    return float(out) if out.ndim == 0 else out


def draw_perturbation(rng: np.random.Generator, hypothesis: Hypothesis) -> np.ndarray:
    """Draw one zero-mean Gaussian perturbation with scale ``hypothesis.sigma``.

    Equivalent to drawing from the median-deviation parametrization
    N_m(0, phi): the distributions coincide, only the mirroring step
    cares about phi.
    """
    return rng.standard_normal(hypothesis.dim) * hypothesis.sigma


def mirror(eps, phi):
    """Reflect perturbations to the other side of the median deviation.

    With ``a = (phi - |eps|) / phi`` the reflected magnitude is

        |eps*| = phi * exp(c1 * (|a|^3 - |a|)/log|a| + c2 * |a|)   for a <= 0
        |eps*| = phi * exp(a) / (1 - a^3)^(c3 * a)                 for a > 0

    and the sign of eps is kept (sign(0) is taken as +1).  Removable
    singularities of the written expression are evaluated by their
    limits: the log-ratio term is 0 at |a| = 0 and 2 at |a| = 1.  |eps|
    is clamped below at EPS_FLOOR_FACTOR * phi so the a -> 1 pole of the
    upper branch is never reached.  The output magnitude is floored at
    OUT_FLOOR_FACTOR * phi: around |eps| > 30 phi the exponential
    underflows to exactly 0.0, which would lose the sign.

    Samples inside the median deviation land outside it and vice versa;
    phi itself is the fixed point.  Accepts scalars or arrays
    (broadcast); every phi must be positive.
    """
    eps_arr = np.asarray(eps, dtype=float)
    phi_arr = np.asarray(phi, dtype=float)
    if np.any(phi_arr <= 0):
        raise ValueError("phi must be strictly positive")

    sign = np.where(eps_arr < 0, -1.0, 1.0)
    mag = np.maximum(np.abs(eps_arr), EPS_FLOOR_FACTOR * phi_arr)
    a = (phi_arr - mag) / phi_arr
    t = np.abs(a)

    with np.errstate(divide="ignore", invalid="ignore"):
        log_ratio = np.where(
            t == 1.0, 2.0, np.where(t == 0.0, 0.0, (t * t * t - t) / np.log(t))
        )
        below = np.exp(MIRROR_C1 * log_ratio + MIRROR_C2 * t)
        above = np.exp(a) / (1.0 - a ** 3) ** (MIRROR_C3 * a)

    out = sign * phi_arr * np.maximum(np.where(a <= 0, below, above), OUT_FLOOR_FACTOR)
    return float(out) if out.ndim == 0 else out


def quad_from_eps(hypothesis: Hypothesis, eps: np.ndarray) -> SampleQuad:
    """Mirror an already-drawn eps and build the four parameter vectors.

    Components with sigma_i = 0 get eps_i = eps*_i = 0.  Rewards are
    left unset.
    """
    eps = np.asarray(eps, dtype=float)
    alive = hypothesis.sigma > 0
    if alive.all():
        eps_star = mirror(eps, hypothesis.phi)
    else:
        eps = np.where(alive, eps, 0.0)
        eps_star = np.zeros_like(eps)
        if alive.any():
            eps_star[alive] = mirror(eps[alive], hypothesis.phi[alive])
    mu = hypothesis.mu
    return SampleQuad(
        eps=eps,
        eps_star=eps_star,
        theta_pp=mu + eps,
        theta_mp=mu - eps,
        theta_pm=mu + eps_star,
        theta_mm=mu - eps_star,
    )


def make_quad(rng: np.random.Generator, hypothesis: Hypothesis) -> SampleQuad:
    """Draw a fresh perturbation and build its super-symmetric quad."""
    return quad_from_eps(hypothesis, draw_perturbation(rng, hypothesis))
