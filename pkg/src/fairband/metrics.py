"""Round-level auditing and run-level aggregation.

The auditor checks each round's action distribution against the true means:
giving one arm strictly more probability than another is only justified when
its true mean is strictly higher.  A probability gap paired with a mean gap
of at most the audit slack in the wrong direction is flagged as an unfair
decision.  Regret is measured against the per-context best arm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PROB_SLACK",
    "unfair_decision",
    "regret_increment",
    "RunResult",
    "PolicySummary",
    "summarize",
]

# Probability differences at or below this are treated as equal, so policies
# that intend a uniform distribution are not flagged over float dust.
PROB_SLACK = 1e-12


def unfair_decision(probs: np.ndarray, means: np.ndarray, tau: float) -> bool:
    """True when some arm gets strictly more probability despite a worse mean.

    Worse means worse by more than ``tau``: the pair (i, j) violates when
    probs[i] > probs[j] + PROB_SLACK while means[i] < means[j] - tau.
    Preferring an arm whose mean ties the alternative is not flagged; the
    rule only fires when the preferred arm is genuinely behind.
    """
    if tau < 0:
        raise ValueError(f"audit slack must be nonnegative, got {tau!r}")
    p = np.asarray(probs, dtype=float)
    m = np.asarray(means, dtype=float)
    over = p[:, None] > p[None, :] + PROB_SLACK
    behind = m[:, None] < m[None, :] - tau
    return bool(np.any(over & behind))


def regret_increment(means: np.ndarray, arm: int) -> float:
    """Gap between the best arm's mean and the chosen arm's mean."""
    m = np.asarray(means, dtype=float)
    return float(m.max() - m[arm])


@dataclass(frozen=True)
class RunResult:
    """One trajectory's outcome, cumulative by round."""

    policy: str
    seed: int
    cum_regret: np.ndarray  # (T,) float
    cum_unfair: np.ndarray  # (T,) int
    corruption_spent: float
    wall_time: float

    @property
    def final_regret(self) -> float:
        return float(self.cum_regret[-1])

    @property
    def final_unfair(self) -> int:
        return int(self.cum_unfair[-1])


@dataclass(frozen=True)
class PolicySummary:
    """Across-seed aggregate for one policy."""

    policy: str
    runs: int
    regret_mean: float
    regret_sd: float
    unfair_mean: float
    unfair_sd: float
    regret_curve: np.ndarray  # (T,) mean cumulative regret per round
    regret_halfwidth: np.ndarray  # (T,) 1.96 * sd / sqrt(runs)
    unfair_curve: np.ndarray
    unfair_halfwidth: np.ndarray


def _sd(values: np.ndarray, axis=None) -> np.ndarray:
    # Sample standard deviation; a single run has none.
    values = np.asarray(values, dtype=float)
    n = values.shape[0] if values.ndim else 1
    if n < 2:
        return np.zeros_like(values.sum(axis=0)) if axis == 0 else 0.0
    return values.std(axis=axis, ddof=1)


def summarize(policy: str, results: list[RunResult]) -> PolicySummary:
    if not results:
        raise ValueError("cannot summarize zero runs")
    finals_r = np.array([r.final_regret for r in results], dtype=float)
    finals_u = np.array([r.final_unfair for r in results], dtype=float)
    regret = np.stack([r.cum_regret for r in results])
    unfair = np.stack([r.cum_unfair for r in results]).astype(float)
    n = len(results)
    z = 1.96 / np.sqrt(n)
    return PolicySummary(
        policy=policy,
        runs=n,
        regret_mean=float(finals_r.mean()),
        regret_sd=float(_sd(finals_r)),
        unfair_mean=float(finals_u.mean()),
        unfair_sd=float(_sd(finals_u)),
        regret_curve=regret.mean(axis=0),
        regret_halfwidth=z * _sd(regret, axis=0),
        unfair_curve=unfair.mean(axis=0),
        unfair_halfwidth=z * _sd(unfair, axis=0),
    )
