"""Policies for linear reward models.

The fair policy explores uniformly for a logarithmic prefix, freezes that
prefix's per-arm estimates as a coarse screen, and afterwards randomizes
uniformly over the arms whose running estimates chain to the best within a
shrinking tolerance.  Its robust variant stretches the exploration prefix and
slows the tolerance decay in proportion to an assumed corruption budget.
Alongside them: a forced-sampling eliminator, a greedy fitter, an optimistic
index policy and uniform random, used as the comparison field.
"""

from __future__ import annotations

import math

import numpy as np

from .chaining import candidate_set, chain_component_of_max
from .core import Policy
from .estimators import RANK_TOL

__all__ = [
    "FairLinearPolicy",
    "ForcedSampleLinearPolicy",
    "GreedyLinearPolicy",
    "OptimisticLinearPolicy",
    "UniformRandomPolicy",
]

# Regularization added to the one-shot solve that freezes the screen
# estimates.  Matches the optimistic baseline's Gram floor.
FREEZE_RIDGE = 0.01


class _ArmAccumulator:
    """Per-arm normal equations, updated in place."""

    def __init__(self, n_arms: int, width: int):
        self.gram = np.zeros((n_arms, width, width))
        self.moment = np.zeros((n_arms, width))
        self.counts = np.zeros(n_arms, dtype=np.int64)

    def add(self, arm: int, z: np.ndarray, y: float) -> None:
        self.gram[arm] += np.outer(z, z)
        self.moment[arm] += y * z
        self.counts[arm] += 1

    def solve(self, arm: int) -> np.ndarray:
        G = self.gram[arm]
        m = self.moment[arm]
        if self.counts[arm] >= G.shape[0]:
            # Likely full rank: the direct solve is the OLS solution.
            try:
                beta = np.linalg.solve(G, m)
                if np.all(np.isfinite(beta)):
                    return beta
            except np.linalg.LinAlgError:
                pass
        # Fewer samples than coefficients makes the Gram singular by
        # construction (and a direct solve would return amplified noise
        # rather than raise), so route those fits to the minimum-norm
        # solution explicitly.
        return np.linalg.lstsq(G, m, rcond=RANK_TOL)[0]


def _augment(x: np.ndarray) -> np.ndarray:
    z = np.empty(x.shape[0] + 1)
    z[0] = 1.0
    z[1:] = x
    return z


class FairLinearPolicy(Policy):
    """Uniform exploration, frozen screen, then chained randomization.

    Exploration runs for ceil(explore_scale * ln(horizon) + robust_pad *
    assumed_budget) rounds, uniform over all arms.  The per-arm estimates at
    the end of that prefix are frozen (with a small ridge on the one-shot
    solve, so an arm left underdetermined by the random draw cannot freeze
    wild extrapolations); each later round screens arms by chaining the
    frozen predictions to the best within half the screen width.
    If one arm survives it is played outright.  Otherwise the running
    all-sample predictions of the survivors are chained again at tolerance
    tol_scale * sqrt(ln(horizon)/t + budget_drag * assumed_budget / t) and
    the policy randomizes uniformly over the result.  With a zero assumed
    budget the robust knobs vanish and the variant is round-for-round
    identical to the plain policy.
    """

    def __init__(
        self,
        n_arms: int,
        dim: int,
        horizon: int,
        explore_scale: float = 20.0,
        tol_scale: float = 1.0,
        screen_width: float = 1.2,
        assumed_budget: float = 0.0,
        robust_pad: float = 4.0,
        budget_drag: float = 2.0,
        name: str = "fair_ols",
    ):
        super().__init__(n_arms, dim, horizon)
        if assumed_budget < 0:
            raise ValueError("assumed budget must be nonnegative")
        self.name = name
        self.screen_width = float(screen_width)
        self.tol_scale = float(tol_scale)
        self.assumed_budget = float(assumed_budget)
        self.budget_drag = float(budget_drag)
        self.exploration_len = math.ceil(
            explore_scale * math.log(horizon) + robust_pad * assumed_budget
        )
        self._all = _ArmAccumulator(n_arms, dim + 1)
        self._frozen: np.ndarray | None = None  # (n_arms, dim + 1) after the prefix

    def error_tolerance(self, t: int) -> float:
        lnT = math.log(self.horizon)
        return self.tol_scale * math.sqrt(
            lnT / t + self.budget_drag * self.assumed_budget / t
        )

    def distribution(self, x: np.ndarray, t: int) -> np.ndarray:
        if t <= self.exploration_len or self._frozen is None:
            return self._uniform()
        z = _augment(x)
        screen_preds = self._frozen @ z
        screened = chain_component_of_max(screen_preds, self.screen_width / 2.0)
        if len(screened) == 1:
            return self._point_mass(next(iter(screened)))
        members = sorted(screened)
        running = np.full(self.n_arms, -np.inf)
        for k in members:
            running[k] = float(self._all.solve(k) @ z)
        final = candidate_set(running, members, self.error_tolerance(t))
        return self.uniform_over(sorted(final), self.n_arms)

    def observe(self, x: np.ndarray, arm: int, reward: float, t: int) -> None:
        self._all.add(arm, _augment(x), reward)
        if t == self.exploration_len:
            # The screen built here is never refreshed, so an arm whose
            # exploration draw left it with fewer samples than coefficients
            # must not freeze unboundedly amplified extrapolations.  A small
            # ridge caps that amplification; determined arms shift by a
            # negligible amount.
            eye = FREEZE_RIDGE * np.eye(self._all.gram.shape[1])
            self._frozen = np.stack(
                [
                    np.linalg.solve(self._all.gram[k] + eye, self._all.moment[k])
                    for k in range(self.n_arms)
                ]
            )


class ForcedSampleLinearPolicy(Policy):
    """Forced sampling on a doubling schedule, then screen-and-exploit.

    Arm i is forced at rounds (2**n - 1) * n_arms * q + j for j in
    (q*i, q*(i+1)], any n >= 0.  Off-schedule rounds keep the arms whose
    forced-sample predictions sit within half the screen width of the best,
    then play the survivor with the highest all-sample prediction.  The
    forced-sample estimates stay immune to adaptive sampling bias, but the
    final pick is a hard argmax, so close arms are resolved by fiat rather
    than randomization.

    Like the optimistic baseline, the fits consume the raw context features
    (no constant term), so any arm-specific offset in the reward surface is
    folded into the slope estimates rather than modeled separately.
    """

    def __init__(
        self,
        n_arms: int,
        dim: int,
        horizon: int,
        forced_block: int = 2,
        screen_width: float = 1.2,
        name: str = "ols_bandit",
    ):
        super().__init__(n_arms, dim, horizon)
        self.name = name
        self.screen_width = float(screen_width)
        q = int(forced_block)
        self.forced_arm = np.full(horizon + 1, -1, dtype=np.int64)
        n = 0
        while (2**n - 1) * n_arms * q < horizon:
            base = (2**n - 1) * n_arms * q
            for i in range(n_arms):
                for j in range(q * i + 1, q * (i + 1) + 1):
                    t = base + j
                    if t <= horizon:
                        self.forced_arm[t] = i
            n += 1
        self._forced = _ArmAccumulator(n_arms, dim)
        self._all = _ArmAccumulator(n_arms, dim)

    def distribution(self, x: np.ndarray, t: int) -> np.ndarray:
        forced = int(self.forced_arm[t])
        if forced >= 0:
            return self._point_mass(forced)
        forced_preds = np.array([float(self._forced.solve(k) @ x) for k in range(self.n_arms)])
        # Threshold screen, not chaining: keep arms within the slab below the max.
        keep = np.flatnonzero(forced_preds >= forced_preds.max() - self.screen_width / 2.0)
        all_preds = np.array([float(self._all.solve(k) @ x) for k in keep])
        return self._point_mass(int(keep[int(np.argmax(all_preds))]))

    def observe(self, x: np.ndarray, arm: int, reward: float, t: int) -> None:
        self._all.add(arm, x, reward)
        if int(self.forced_arm[t]) == arm:
            self._forced.add(arm, x, reward)


class GreedyLinearPolicy(Policy):
    """Round-robin warm start, then always the argmax of the fitted means.

    Fits consume the raw context features (no constant term), matching the
    other non-randomizing baselines.
    """

    def __init__(self, n_arms: int, dim: int, horizon: int, warm_per_arm: int | None = None,
                 name: str = "greedy"):
        super().__init__(n_arms, dim, horizon)
        self.name = name
        # Enough samples per arm for a determined fit before going greedy.
        self.warm_per_arm = warm_per_arm if warm_per_arm is not None else dim + 2
        self._all = _ArmAccumulator(n_arms, dim)

    def distribution(self, x: np.ndarray, t: int) -> np.ndarray:
        if t <= self.warm_per_arm * self.n_arms:
            return self._point_mass((t - 1) % self.n_arms)
        preds = np.array([float(self._all.solve(k) @ x) for k in range(self.n_arms)])
        return self._point_mass(int(np.argmax(preds)))

    def observe(self, x: np.ndarray, arm: int, reward: float, t: int) -> None:
        self._all.add(arm, x, reward)


class OptimisticLinearPolicy(Policy):
    """Ridge regression with an upper confidence bonus per arm.

    Index of arm k at context x: the ridge prediction plus the elliptical
    norm of x under the arm's inverse design, scaled by a slowly growing
    confidence radius.  Ties break to the lowest arm index.  Contexts enter
    raw, without the intercept feature.
    """

    def __init__(
        self,
        n_arms: int,
        dim: int,
        horizon: int,
        ridge: float = 0.01,
        radius_scale: float = 0.05,
        radius_floor: float = 0.2,
        name: str = "lin_ucb",
    ):
        super().__init__(n_arms, dim, horizon)
        self.name = name
        self.ridge = float(ridge)
        self.radius_scale = float(radius_scale)
        self.radius_floor = float(radius_floor)
        self._design = np.tile(ridge * np.eye(dim), (n_arms, 1, 1))
        self._moment = np.zeros((n_arms, dim))

    def distribution(self, x: np.ndarray, t: int) -> np.ndarray:
        radius = self.radius_scale * math.sqrt(
            self.dim * math.log(self.horizon * (1.0 + 4.0 * t / self.ridge))
        ) + self.radius_floor
        scores = np.empty(self.n_arms)
        for k in range(self.n_arms):
            theta = np.linalg.solve(self._design[k], self._moment[k])
            width = math.sqrt(float(x @ np.linalg.solve(self._design[k], x)))
            scores[k] = float(x @ theta) + radius * width
        return self._point_mass(int(np.argmax(scores)))

    def observe(self, x: np.ndarray, arm: int, reward: float, t: int) -> None:
        self._design[arm] += np.outer(x, x)
        self._moment[arm] += reward * x


class UniformRandomPolicy(Policy):
    """Uniform over all arms every round; the zero-learning reference."""

    def __init__(self, n_arms: int, dim: int, horizon: int, name: str = "random"):
        super().__init__(n_arms, dim, horizon)
        self.name = name

    def distribution(self, x: np.ndarray, t: int) -> np.ndarray:
        return self._uniform()
