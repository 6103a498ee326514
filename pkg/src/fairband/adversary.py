"""Budgeted reward corruption.

The adversary observes the round (context, chosen arm, true mean) and may add
an offset to the reward before the policy sees it.  Offsets draw down a fixed
absolute budget; a planned offset that does not fit in the remaining budget is
dropped entirely rather than clipped, so every emitted corruption has its
intended shape.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

__all__ = ["Adversary", "NullAdversary", "TargetValueAttack", "MaskArmAttack", "RegionSuppressAttack"]


class Adversary:
    """Base corruption source: never corrupts, tracks nothing."""

    def __init__(self, budget: float = 0.0):
        if budget < 0:
            raise ValueError(f"budget must be nonnegative, got {budget!r}")
        self.budget = float(budget)
        self.spent = 0.0

    @property
    def remaining(self) -> float:
        return self.budget - self.spent

    def _planned(self, t: int, x: np.ndarray, arm: int, true_mean: float) -> float:
        return 0.0

    def corrupt(self, t: int, x: np.ndarray, arm: int, true_mean: float) -> float:
        """Offset applied to this round's reward, after the budget gate."""
        c = self._planned(t, x, arm, true_mean)
        if c == 0.0:
            return 0.0
        if abs(c) > self.remaining:
            return 0.0
        self.spent += abs(c)
        return c


class NullAdversary(Adversary):
    pass


class TargetValueAttack(Adversary):
    """Drag chosen vulnerable arms' rewards to a fixed target value.

    Whenever a vulnerable arm is played the reward is replaced (via an offset)
    by ``target``, making those arms look uniformly mediocre until the budget
    runs out.
    """

    def __init__(self, budget: float, vulnerable_arms: frozenset[int], target: float):
        super().__init__(budget)
        self.vulnerable_arms = frozenset(vulnerable_arms)
        self.target = float(target)

    def _planned(self, t: int, x: np.ndarray, arm: int, true_mean: float) -> float:
        if arm in self.vulnerable_arms:
            return self.target - true_mean
        return 0.0


class MaskArmAttack(Adversary):
    """Bury one arm during an initial window.

    Through round ``until`` the masked arm's rewards are shifted down by more
    than twice the environment's reward bound, putting them below anything an
    honest arm can produce.  A policy that trusts its early estimates then
    writes the arm off before clean data ever arrives.
    """

    def __init__(self, budget: float, arm: int, until: int, magnitude: float):
        super().__init__(budget)
        if magnitude <= 0:
            raise ValueError(f"magnitude must be positive, got {magnitude!r}")
        self.arm = int(arm)
        self.until = int(until)
        self.magnitude = float(magnitude)

    def _planned(self, t: int, x: np.ndarray, arm: int, true_mean: float) -> float:
        if arm == self.arm and t <= self.until:
            return -self.magnitude
        return 0.0


class RegionSuppressAttack(Adversary):
    """Smoothly depress one arm inside a context region during a window.

    The offset is -depth times a smooth weight supported on the region, so
    the corrupted reward surface is as smooth as the honest one and nothing
    about an individual round looks anomalous.  Aimed at the region around a
    tie, it tilts early comparisons just enough to push elimination into
    contexts where the target arm is in truth competitive.
    """

    def __init__(
        self,
        budget: float,
        arm: int,
        until: int,
        depth: float,
        weight: Callable[[float], float],
    ):
        super().__init__(budget)
        if depth <= 0:
            raise ValueError(f"depth must be positive, got {depth!r}")
        self.arm = int(arm)
        self.until = int(until)
        self.depth = float(depth)
        self.weight = weight

    def _planned(self, t: int, x: np.ndarray, arm: int, true_mean: float) -> float:
        if arm == self.arm and t <= self.until:
            w = self.weight(float(x[0]))
            if w > 0.0:
                return -self.depth * w
        return 0.0
