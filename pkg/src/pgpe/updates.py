"""Gradient estimators, baselines, and hypothesis updates.

Five update schemes over the same Gaussian hypothesis:

* ``pgpe_update``    - single sample against a baseline (1 eval/update)
* ``sys_update``     - symmetric pair ``mu +- eps``; the mean update is a
                       central difference, the scale update still uses a
                       baseline (2 evals/update)
* ``supsys_update``  - symmetric pair plus its mirrored pair; both the
                       mean and the scale updates are baseline-free
                       (4 evals/update)
* ``pgpe4smp_update``- two independent symmetric pairs averaged, for
                       sample-budget-fair comparison against the quad
                       (4 evals/update)
* ``supif_step``     - escalates single -> pair -> quad only while the
                       observed reward stays below the baseline
                       (1, 2 or 4 evals/update)

All functions are pure: they return an UpdateReport (and, where a
baseline is involved, a new BaselineState) and never modify their
inputs.  ``apply_update`` folds a report into a new Hypothesis, clamping
sigma at ``sigma_floor``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from .sampling import Hypothesis, SampleQuad, draw_perturbation, quad_from_eps


class Variant(str, enum.Enum):
    """Update-scheme selector."""

    PGPE = "PGPE"
    SYS = "SyS"
    SUPSYS = "SupSyS"
    PGPE4SMP = "PGPE4smp"
    SUPIF = "SupIf"


class Branch(str, enum.Enum):
    """Escalation level a SupIf step ended at."""

    SINGLE = "single"
    SYS = "sys"
    SUPSYS = "supsys"


# Objective evaluations consumed per update; SupIf varies per step.
EVALS_PER_UPDATE = {
    Variant.PGPE: 1,
    Variant.SYS: 2,
    Variant.SUPSYS: 4,
    Variant.PGPE4SMP: 4,
}


@dataclass
class MetaParams:
    """Step sizes and variant selection; the grid-searched tunables."""

    alpha_mu: float
    alpha_sigma: float
    variant: Variant = Variant.SYS
    sigma_floor: float = 1e-10

    def __post_init__(self):
        self.variant = Variant(self.variant)
        if self.alpha_mu <= 0 or self.alpha_sigma <= 0:
            raise ValueError("step sizes must be strictly positive")
        if self.sigma_floor <= 0:
            raise ValueError("sigma_floor must be strictly positive")


@dataclass(frozen=True)
class BaselineState:
    """Reference-reward estimator state.

    kind 'decaying':  b <- gamma * r + (1 - gamma) * b
    kind 'moving':    b = mean of the last `window` rewards
    kind 'optimal':   b = sum(r * w) / sum(w) with w the squared norm of
                      the sample's log-density gradient; falls back to
                      the plain running mean (flagged) while sum(w) = 0.

    ``value`` is None until the first observation; update rules treat an
    uninitialized baseline as equal to the reward being compared, so the
    first baseline-dependent update term is zero.
    """

    kind: str = "decaying"
    gamma: float = 0.1
    window: int = 10
    value: float | None = None
    history: tuple = ()
    accum_num: float = 0.0
    accum_den: float = 0.0
    n_obs: int = 0
    reward_sum: float = 0.0
    used_fallback: bool = False

    def __post_init__(self):
        if self.kind not in ("decaying", "moving", "optimal"):
            raise ValueError(f"unknown baseline kind {self.kind!r}")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError("gamma must be in (0, 1]")
        if self.window < 1:
            raise ValueError("window must be >= 1")

    @property
    def initialized(self) -> bool:
        return self.value is not None


@dataclass
class UpdateReport:
    """One update's deltas plus its sample accounting."""

    delta_mu: np.ndarray
    delta_sigma: np.ndarray
    evaluations_used: int
    rewards_seen: list[float] = field(default_factory=list)
    branch_taken: Branch | None = None


def baseline_step(state: BaselineState, r: float, eligibility_sq_norm: float = 0.0) -> BaselineState:
    """Fold one observed reward into the baseline, returning a new state."""
    r = float(r)
    n_obs = state.n_obs + 1
    reward_sum = state.reward_sum + r
    if state.kind == "decaying":
        value = r if state.value is None else state.gamma * r + (1.0 - state.gamma) * state.value
        return replace(state, value=value, n_obs=n_obs, reward_sum=reward_sum)
    if state.kind == "moving":
        history = (state.history + (r,))[-state.window:]
        return replace(
            state,
            value=sum(history) / len(history),
            history=history,
            n_obs=n_obs,
            reward_sum=reward_sum,
        )
    # optimal
    if eligibility_sq_norm < 0:
        raise ValueError("eligibility_sq_norm must be >= 0")
    num = state.accum_num + r * eligibility_sq_norm
    den = state.accum_den + eligibility_sq_norm
    if den > 0:
        value, fallback = num / den, False
    else:
        value, fallback = reward_sum / n_obs, True
    return replace(
        state,
        value=value,
        accum_num=num,
        accum_den=den,
        n_obs=n_obs,
        reward_sum=reward_sum,
        used_fallback=fallback,
    )


def eligibility(theta_i, mu_i, sigma_i):
    """Gradients of log N(theta; mu, sigma^2) in mu and in sigma.

    grad_mu = (theta - mu) / sigma^2
    grad_sigma = ((theta - mu)^2 - sigma^2) / sigma^3

    Vectorized over arrays; sigma must be strictly positive.
    """
    theta_i = np.asarray(theta_i, dtype=float)
    mu_i = np.asarray(mu_i, dtype=float)
    sigma_i = np.asarray(sigma_i, dtype=float)
    if np.any(sigma_i <= 0):
        raise ValueError("sigma must be strictly positive")
    diff = theta_i - mu_i
    var = sigma_i * sigma_i
    grad_mu = diff / var
    grad_sigma = (diff * diff - var) / (var * sigma_i)
    if grad_mu.ndim == 0:
        return float(grad_mu), float(grad_sigma)
    return grad_mu, grad_sigma


def _baseline_or(state: BaselineState, fallback: float) -> float:
    return fallback if state.value is None else state.value


def _elig_sq_norm(diff: np.ndarray, sigma: np.ndarray) -> float:
    """Squared norm of the full log-density gradient at mu + diff."""
    var = sigma * sigma
    gmu = diff / var
    gsig = (diff * diff - var) / (var * sigma)
    return float(np.dot(gmu, gmu) + np.dot(gsig, gsig))


def pgpe_update(
    hyp: Hypothesis,
    theta: np.ndarray,
    r: float,
    baseline: BaselineState,
    meta: MetaParams,
) -> tuple[UpdateReport, BaselineState]:
    """Single-sample update against the baseline.

    delta_mu = alpha_mu * (r - b) * (theta - mu)
    delta_sigma = alpha_sigma * (r - b) * ((theta - mu)^2 - sigma^2) / sigma

    The baseline is consumed first and then stepped with r, so the very
    first call (uninitialized baseline) produces a zero update and seeds
    b with r.
    """
    theta = np.asarray(theta, dtype=float)
    diff = theta - hyp.mu
    b = _baseline_or(baseline, r)
    adv = r - b
    sigma = hyp.sigma
    delta_mu = meta.alpha_mu * adv * diff
    delta_sigma = meta.alpha_sigma * adv * (diff * diff - sigma * sigma) / sigma
    new_baseline = baseline_step(baseline, r, _elig_sq_norm(diff, sigma))
    report = UpdateReport(
        delta_mu=delta_mu,
        delta_sigma=delta_sigma,
        evaluations_used=1,
        rewards_seen=[float(r)],
    )
    return report, new_baseline


def _sys_deltas(sigma, eps, r_plus, r_minus, b, meta):
    delta_mu = 0.5 * meta.alpha_mu * (r_plus - r_minus) * eps
    mean_r = 0.5 * (r_plus + r_minus)
    delta_sigma = meta.alpha_sigma * (mean_r - b) * (eps * eps - sigma * sigma) / sigma
    return delta_mu, delta_sigma


def sys_update(
    hyp: Hypothesis,
    eps: np.ndarray,
    r_plus: float,
    r_minus: float,
    baseline: BaselineState,
    meta: MetaParams,
) -> tuple[UpdateReport, BaselineState]:
    """Symmetric-pair update.

    delta_mu is the baseline-free central difference
    ``alpha_mu * eps * (r+ - r-) / 2``; delta_sigma compares the pair's
    mean reward to the baseline.  The baseline is then stepped with the
    pair mean.
    """
    eps = np.asarray(eps, dtype=float)
    mean_r = 0.5 * (r_plus + r_minus)
    b = _baseline_or(baseline, mean_r)
    delta_mu, delta_sigma = _sys_deltas(hyp.sigma, eps, r_plus, r_minus, b, meta)
    new_baseline = baseline_step(baseline, mean_r, _elig_sq_norm(eps, hyp.sigma))
    report = UpdateReport(
        delta_mu=delta_mu,
        delta_sigma=delta_sigma,
        evaluations_used=2,
        rewards_seen=[float(r_plus), float(r_minus)],
    )
    return report, new_baseline


def supsys_update(hyp: Hypothesis, quad: SampleQuad, meta: MetaParams) -> UpdateReport:
    """Baseline-free update from a symmetric pair and its mirrored pair.

    delta_mu sums the central-difference terms of both pairs:
        alpha_mu * (eps * (r_pp - r_mp) + eps* * (r_pm - r_mm)) / 2
    delta_sigma contrasts the two pair means, using the original eps:
        alpha_sigma * ((eps^2 - sigma^2) / sigma) * (r++ - r--) / 2

    No baseline is consulted or updated.  Raises if any reward is unset.
    """
    if not quad.rewards_set:
        raise ValueError("supsys_update requires all four rewards to be set")
    sigma = hyp.sigma
    delta_mu = 0.5 * meta.alpha_mu * (
        (quad.r_pp - quad.r_mp) * quad.eps + (quad.r_pm - quad.r_mm) * quad.eps_star
    )
    r_orig = 0.5 * (quad.r_pp + quad.r_mp)
    r_mirror = 0.5 * (quad.r_pm + quad.r_mm)
    delta_sigma = 0.5 * meta.alpha_sigma * (r_orig - r_mirror) * (
        (quad.eps * quad.eps - sigma * sigma) / sigma
    )
    return UpdateReport(
        delta_mu=delta_mu,
        delta_sigma=delta_sigma,
        evaluations_used=4,
        rewards_seen=[quad.r_pp, quad.r_mp, quad.r_pm, quad.r_mm],
    )


def pgpe4smp_update(
    hyp: Hypothesis,
    pair1: tuple[np.ndarray, float, float],
    pair2: tuple[np.ndarray, float, float],
    baseline: BaselineState,
    meta: MetaParams,
) -> tuple[UpdateReport, BaselineState]:
    """Average of two symmetric-pair updates drawn from the same hypothesis.

    Each pair is (eps, r_plus, r_minus).  Both pairs see the same
    baseline value; the baseline is then stepped once with the mean of
    all four rewards.
    """
    eps1, rp1, rm1 = pair1
    eps2, rp2, rm2 = pair2
    eps1 = np.asarray(eps1, dtype=float)
    eps2 = np.asarray(eps2, dtype=float)
    rewards = [float(rp1), float(rm1), float(rp2), float(rm2)]
    mean_all = sum(rewards) / 4.0
    b = _baseline_or(baseline, mean_all)
    d1_mu, d1_sigma = _sys_deltas(hyp.sigma, eps1, rp1, rm1, b, meta)
    d2_mu, d2_sigma = _sys_deltas(hyp.sigma, eps2, rp2, rm2, b, meta)
    w = 0.5 * (_elig_sq_norm(eps1, hyp.sigma) + _elig_sq_norm(eps2, hyp.sigma))
    new_baseline = baseline_step(baseline, mean_all, w)
    report = UpdateReport(
        delta_mu=0.5 * (d1_mu + d2_mu),
        delta_sigma=0.5 * (d1_sigma + d2_sigma),
        evaluations_used=4,
        rewards_seen=rewards,
    )
    return report, new_baseline


def supif_step(
    hyp: Hypothesis,
    rng: np.random.Generator,
    objective,
    baseline: BaselineState,
    meta: MetaParams,
) -> tuple[UpdateReport, BaselineState]:
    """Conditional escalation step.

    Draw eps and evaluate r1 at mu + eps.  If r1 beats the baseline, do
    a single-sample update (1 evaluation).  Otherwise evaluate mu - eps;
    if the pair mean beats the baseline, do a symmetric-pair update
    (2 evaluations).  Otherwise mirror eps and do a full quad update
    (4 evaluations).  The baseline is stepped once with the mean of all
    rewards actually observed.  On the very first step (uninitialized
    baseline) no update is applied; b is seeded with r1.

    ``objective`` must expose ``reward(theta) -> float``.
    """
    eps = draw_perturbation(rng, hyp)
    theta_plus = hyp.mu + eps
    r1 = objective.reward(theta_plus)
    sigma = hyp.sigma
    w = _elig_sq_norm(eps, sigma)
    zero = np.zeros_like(hyp.mu)

    if not baseline.initialized:
        report = UpdateReport(
            delta_mu=zero,
            delta_sigma=zero.copy(),
            evaluations_used=1,
            rewards_seen=[r1],
            branch_taken=Branch.SINGLE,
        )
        return report, baseline_step(baseline, r1, w)

    b = baseline.value
    if r1 > b:
        diff = eps
        adv = r1 - b
        report = UpdateReport(
            delta_mu=meta.alpha_mu * adv * diff,
            delta_sigma=meta.alpha_sigma * adv * (diff * diff - sigma * sigma) / sigma,
            evaluations_used=1,
            rewards_seen=[r1],
            branch_taken=Branch.SINGLE,
        )
        return report, baseline_step(baseline, r1, w)

    r2 = objective.reward(hyp.mu - eps)
    pair_mean = 0.5 * (r1 + r2)
    if pair_mean > b:
        delta_mu, delta_sigma = _sys_deltas(sigma, eps, r1, r2, b, meta)
        report = UpdateReport(
            delta_mu=delta_mu,
            delta_sigma=delta_sigma,
            evaluations_used=2,
            rewards_seen=[r1, r2],
            branch_taken=Branch.SYS,
        )
        return report, baseline_step(baseline, pair_mean, w)

    quad = quad_from_eps(hyp, eps)
    quad.set_rewards(r1, r2, objective.reward(quad.theta_pm), objective.reward(quad.theta_mm))
    inner = supsys_update(hyp, quad, meta)
    report = UpdateReport(
        delta_mu=inner.delta_mu,
        delta_sigma=inner.delta_sigma,
        evaluations_used=4,
        rewards_seen=inner.rewards_seen,
        branch_taken=Branch.SUPSYS,
    )
    mean_all = sum(report.rewards_seen) / 4.0
    return report, baseline_step(baseline, mean_all, w)


def apply_update(hyp: Hypothesis, report: UpdateReport, meta: MetaParams) -> Hypothesis:
    """Gradient-ascent application with the sigma safety clamp."""
    if report.delta_mu.shape != hyp.mu.shape:
        raise ValueError("update dimension does not match hypothesis")
    return Hypothesis(
        mu=hyp.mu + report.delta_mu,
        sigma=np.maximum(hyp.sigma + report.delta_sigma, meta.sigma_floor),
    )
