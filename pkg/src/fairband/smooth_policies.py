"""Policies for smooth reward models.

The fair policy partitions rounds into epochs and the context box into a
horizon-sized lattice.  Within an epoch it randomizes uniformly over a
per-cell active set; at each epoch boundary the active sets shrink by local
polynomial comparison at the cell center, keeping the arms chained to the
best within twice the previous epoch's tolerance.  Active sets are resolved
lazily per cell and cached, recursing through earlier epochs on first touch,
which is equivalent to refreshing every cell eagerly at each boundary but
only pays for cells that actually occur.  A cell whose active set reaches a
single arm is settled permanently; elimination is never undone.  The robust
variant differs only through its epoch schedule and tolerances.

The simplified baseline bins the context box coarsely and runs an optimistic
index per bin, a deliberately blunt comparison point.
"""

from __future__ import annotations

import math

import numpy as np

from .chaining import candidate_set
from .core import Policy
from .estimators import InsufficientSupportError, local_poly_estimate, poly_degree
from .gridding import EpochPlan, GridLattice, bandwidth_for, build_epoch_plan, make_lattice

__all__ = ["FairSmoothPolicy", "SimplifiedSmoothPolicy"]


class _EpochLog:
    """Per-epoch, per-arm sample store, frozen to arrays at the epoch boundary."""

    def __init__(self, n_arms: int):
        self._x: list[list[np.ndarray]] = [[] for _ in range(n_arms)]
        self._y: list[list[float]] = [[] for _ in range(n_arms)]
        self.frozen: list[tuple[np.ndarray, np.ndarray]] | None = None

    def add(self, arm: int, u: np.ndarray, reward: float) -> None:
        self._x[arm].append(u)
        self._y[arm].append(reward)

    def freeze(self, dim: int) -> None:
        out = []
        for xs, ys in zip(self._x, self._y):
            X = np.array(xs) if xs else np.empty((0, dim))
            out.append((X, np.array(ys)))
        self.frozen = out
        self._x, self._y = [], []


class FairSmoothPolicy(Policy):
    """Epoch-based elimination with per-cell uniform randomization."""

    def __init__(
        self,
        n_arms: int,
        dim: int,
        horizon: int,
        context_lo: np.ndarray,
        context_hi: np.ndarray,
        smoothness: float = 5.0,
        margin: float | None = None,
        c0: float = 0.2,
        c1: float = 0.03,
        c2: float = 0.3,
        robust: bool = False,
        assumed_budget: float = 0.0,
        spacing_multiplier: float = 1.0,
        schedule_mode: str = "practical",
        schedule_extras: dict | None = None,
        name: str = "fair_smooth",
    ):
        super().__init__(n_arms, dim, horizon)
        self.name = name
        self.smoothness = float(smoothness)
        # The margin exponent defaults to the smoothness itself.
        self.margin = float(margin) if margin is not None else float(smoothness)
        self.degree = poly_degree(self.smoothness)
        extras = dict(schedule_extras or {})
        if schedule_mode == "theoretical":
            extras.setdefault("n_arms", n_arms)
        self.plan: EpochPlan = build_epoch_plan(
            horizon,
            self.smoothness,
            self.margin,
            dim,
            c0=c0,
            robust=robust,
            corruption_budget=assumed_budget,
            c1=c1,
            c2=c2,
            mode=schedule_mode,
            **extras,
        )
        self.lattice: GridLattice = make_lattice(
            horizon, self.smoothness, context_lo, context_hi, spacing_multiplier
        )
        self._logs = [_EpochLog(n_arms) for _ in range(self.plan.n_epochs)]
        self._bandwidths: list[np.ndarray | None] = [None] * self.plan.n_epochs
        # (epoch, flat cell index) -> sorted tuple of active arms.
        self._active_cache: dict[tuple[int, int], tuple[int, ...]] = {}

    # -- active-set resolution -------------------------------------------

    def _active(self, epoch: int, coords: tuple[int, ...]) -> tuple[int, ...]:
        if epoch == 1:
            return tuple(range(self.n_arms))
        key = (epoch, self._flat(coords))
        got = self._active_cache.get(key)
        if got is not None:
            return got
        prev = self._active(epoch - 1, coords)
        result = prev if len(prev) == 1 else self._refresh(epoch, coords, prev)
        self._active_cache[key] = result
        return result

    def _refresh(self, epoch: int, coords: tuple[int, ...], prev: tuple[int, ...]) -> tuple[int, ...]:
        """Shrink prev by comparing last epoch's local fits at the cell center."""
        q_prev = epoch - 1
        log = self._logs[q_prev - 1].frozen
        bw = self._bandwidths[q_prev - 1]
        center = self.lattice.center_unit(coords)
        values = np.full(self.n_arms, -np.inf)
        for k in prev:
            X, y = log[k]
            if X.shape[0] == 0:
                return prev  # an arm with no data cannot be compared; keep everyone
            try:
                fit = local_poly_estimate(center, X, y, float(bw[k]), self.degree)
            except InsufficientSupportError:
                return prev
            values[k] = fit.value
        kept = candidate_set(values, list(prev), 2.0 * self.plan.tolerances[q_prev - 1])
        return tuple(sorted(kept))

    def _flat(self, coords: tuple[int, ...]) -> int:
        idx = 0
        for c in coords:
            idx = idx * self.lattice.cells_per_dim + c
        return idx

    # -- policy interface -------------------------------------------------

    def distribution(self, x: np.ndarray, t: int) -> np.ndarray:
        epoch = self.plan.epoch_of(t)
        if epoch == 1:
            return self._uniform()
        coords = self.lattice.cell_coords(x)
        active = self._active(epoch, coords)
        return self.uniform_over(active, self.n_arms)

    def observe(self, x: np.ndarray, arm: int, reward: float, t: int) -> None:
        epoch = self.plan.epoch_of(t)
        self._logs[epoch - 1].add(arm, self.lattice.to_unit(x), reward)
        if self.plan.is_epoch_end(t):
            log = self._logs[epoch - 1]
            log.freeze(self.dim)
            counts = np.array([X.shape[0] for X, _ in log.frozen])
            self._bandwidths[epoch - 1] = np.array(
                [
                    bandwidth_for(int(n), self.smoothness, self.dim) if n > 0 else np.nan
                    for n in counts
                ]
            )


class SimplifiedSmoothPolicy(Policy):
    """Coarse fixed bins with a per-bin optimistic index.

    The context box is split into cells of side 0.25 (after mapping to the
    unit cube) and each cell keeps running means per arm.  Rounds play the
    argmax of mean + bonus_scale * sqrt(bonus_log_scale * ln(t + 1) /
    max(1, n)), unvisited arms first, ties to the lowest arm index.  The
    binning is far coarser than the reward's variation, which is the point:
    it shows what a generic discretized bandit does on these problems.
    """

    def __init__(
        self,
        n_arms: int,
        dim: int,
        horizon: int,
        context_lo: np.ndarray,
        context_hi: np.ndarray,
        bin_side: float = 0.25,
        bonus_scale: float = 0.5,
        bonus_log_scale: float = 1.0,
        name: str = "simplified_smooth",
    ):
        super().__init__(n_arms, dim, horizon)
        self.name = name
        self.bonus_scale = float(bonus_scale)
        self.bonus_log_scale = float(bonus_log_scale)
        cells = math.ceil(1.0 / bin_side)
        self.lattice = GridLattice(
            dim=dim,
            spacing=float(bin_side),
            lo=np.asarray(context_lo, dtype=float),
            hi=np.asarray(context_hi, dtype=float),
            cells_per_dim=cells,
        )
        n_cells = cells**dim
        self._sums = np.zeros((n_cells, n_arms))
        self._counts = np.zeros((n_cells, n_arms), dtype=np.int64)

    def distribution(self, x: np.ndarray, t: int) -> np.ndarray:
        cell = self.lattice.cell_index(x)
        counts = self._counts[cell]
        scores = np.full(self.n_arms, np.inf)
        seen = counts > 0
        if np.any(seen):
            means = self._sums[cell, seen] / counts[seen]
            bonus = self.bonus_scale * np.sqrt(
                self.bonus_log_scale * math.log(t + 1.0) / counts[seen]
            )
            scores[seen] = means + bonus
        return self._point_mass(int(np.argmax(scores)))

    def observe(self, x: np.ndarray, arm: int, reward: float, t: int) -> None:
        cell = self.lattice.cell_index(x)
        self._sums[cell, arm] += reward
        self._counts[cell, arm] += 1
