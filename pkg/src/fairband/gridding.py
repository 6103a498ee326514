"""Discretization lattice and epoch schedules for the nonparametric policies.

The context space is covered by a cubic lattice whose spacing shrinks with the
horizon; decisions are constant on each cell and estimation happens at cell
centers.  Rounds are partitioned into geometrically growing epochs, each with
an elimination tolerance that halves per epoch in the clean schedule and picks
up a corruption-dependent floor in the robust one.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field

import numpy as np

from .estimators import monomial_count

__all__ = [
    "GridLattice",
    "EpochPlan",
    "grid_spacing",
    "make_lattice",
    "bandwidth_for",
    "error_tolerance",
    "build_epoch_plan",
]


def grid_spacing(horizon: int, smoothness: float, dim: int) -> float:
    """Lattice cell side: horizon**(-smoothness/(2*smoothness+dim)) / ln(horizon)."""
    if horizon < 2:
        raise ValueError(f"horizon must be at least 2, got {horizon!r}")
    if smoothness <= 0 or dim < 1:
        raise ValueError(f"need smoothness > 0 and dim >= 1, got {smoothness}, {dim}")
    return horizon ** (-smoothness / (2.0 * smoothness + dim)) / math.log(horizon)


@dataclass(frozen=True)
class GridLattice:
    """Cubic lattice over a box, cells indexed row-major."""

    dim: int
    spacing: float
    lo: np.ndarray
    hi: np.ndarray
    cells_per_dim: int

    @property
    def n_cells(self) -> int:
        return self.cells_per_dim**self.dim

    def to_unit(self, x: np.ndarray) -> np.ndarray:
        """Map a raw context into the unit cube the lattice lives on."""
        x = np.asarray(x, dtype=float)
        u = (x - self.lo) / (self.hi - self.lo)
        if np.any(u < -1e-12) or np.any(u > 1.0 + 1e-12):
            raise ValueError(f"context {x!r} lies outside the lattice box")
        return np.clip(u, 0.0, 1.0)

    def cell_coords(self, x: np.ndarray) -> tuple[int, ...]:
        """Per-axis cell of the grid point nearest to x, ties toward the origin.

        Centers sit at (j + 1/2) * spacing, so a coordinate exactly on a cell
        boundary j * spacing is equidistant between centers j-1 and j and
        resolves to the lower cell.
        """
        u = self.to_unit(x)
        coords = []
        for v in u:
            j = int(math.floor(v / self.spacing))
            if j >= self.cells_per_dim:
                j = self.cells_per_dim - 1
            elif j >= 1 and v <= j * self.spacing:
                j -= 1
            coords.append(j)
        return tuple(coords)

    def cell_index(self, x: np.ndarray) -> int:
        """Row-major flat index of the cell containing x."""
        idx = 0
        for c in self.cell_coords(x):
            idx = idx * self.cells_per_dim + c
        return idx

    def center_unit(self, coords: tuple[int, ...]) -> np.ndarray:
        """Center of a cell in unit-cube coordinates."""
        return (np.asarray(coords, dtype=float) + 0.5) * self.spacing


def make_lattice(
    horizon: int,
    smoothness: float,
    lo: np.ndarray,
    hi: np.ndarray,
    spacing_multiplier: float = 1.0,
) -> GridLattice:
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if lo.shape != hi.shape or lo.ndim != 1:
        raise ValueError("lo and hi must be 1-d arrays of equal length")
    if np.any(hi <= lo):
        raise ValueError("box must have positive side lengths")
    if spacing_multiplier <= 0:
        raise ValueError(f"spacing multiplier must be positive, got {spacing_multiplier!r}")
    dim = lo.shape[0]
    spacing = grid_spacing(horizon, smoothness, dim) * spacing_multiplier
    spacing = min(spacing, 1.0)
    return GridLattice(
        dim=dim,
        spacing=spacing,
        lo=lo,
        hi=hi,
        cells_per_dim=math.ceil(1.0 / spacing),
    )


def bandwidth_for(n_samples: int, smoothness: float, dim: int) -> float:
    """Fit radius from an epoch's per-arm sample count."""
    if n_samples < 1:
        raise ValueError(f"need at least one sample, got {n_samples!r}")
    return n_samples ** (-1.0 / (2.0 * smoothness + dim))


def error_tolerance(
    epoch: int,
    horizon: int,
    smoothness: float,
    margin: float,
    dim: int,
    robust: bool = False,
    corruption_budget: float = 0.0,
    epoch_len: int | None = None,
    c2: float = 0.3,
) -> float:
    """Elimination tolerance for one epoch.

    Clean schedule halves each epoch.  The robust schedule caps the geometric
    decay once it would outrun what the corruption budget allows, floors the
    whole term at the estimation-error scale, and adds a budget-proportional
    slack that shrinks with the epoch length.  At zero budget it reduces to
    the clean value floored at the estimation scale.
    """
    if epoch < 1:
        raise ValueError(f"epoch must be >= 1, got {epoch!r}")
    lnT = math.log(horizon)
    base = lnT ** ((margin - 1.0 - 2.0 * smoothness) / (2.0 * margin - 2.0))
    if not robust:
        return 2.0**-epoch * base
    decay = 2.0**-epoch
    if corruption_budget > 0:
        decay = min(decay, corruption_budget ** (-margin / (2.0 * margin - 1.0)))
    floor = horizon ** (-smoothness / (2.0 * smoothness + dim))
    tol = max(decay * base, floor)
    if corruption_budget > 0:
        if epoch_len is None:
            raise ValueError("robust tolerance with a positive budget needs epoch_len")
        tol += c2 * corruption_budget * epoch_len ** (-2.0 * smoothness / (2.0 * smoothness + dim))
    return tol


@dataclass(frozen=True)
class EpochPlan:
    """Epoch lengths and tolerances covering a horizon exactly."""

    horizon: int
    lengths: tuple[int, ...]
    tolerances: tuple[float, ...]
    boundaries: tuple[int, ...] = field(init=False)  # cumulative end round per epoch

    def __post_init__(self):
        if sum(self.lengths) != self.horizon:
            raise ValueError("epoch lengths must sum to the horizon")
        if len(self.lengths) != len(self.tolerances):
            raise ValueError("one tolerance per epoch required")
        if any(n < 1 for n in self.lengths):
            raise ValueError("epoch lengths must be positive")
        cum = np.cumsum(self.lengths)
        object.__setattr__(self, "boundaries", tuple(int(c) for c in cum))

    @property
    def n_epochs(self) -> int:
        return len(self.lengths)

    def epoch_of(self, t: int) -> int:
        """1-based epoch containing round t in 1..horizon."""
        if not 1 <= t <= self.horizon:
            raise ValueError(f"round {t} outside 1..{self.horizon}")
        return bisect_left(self.boundaries, t) + 1

    def is_epoch_end(self, t: int) -> bool:
        return t in self.boundaries


def build_epoch_plan(
    horizon: int,
    smoothness: float,
    margin: float,
    dim: int,
    c0: float,
    robust: bool = False,
    corruption_budget: float = 0.0,
    c1: float = 0.03,
    c2: float = 0.3,
    mode: str = "practical",
    n_arms: int | None = None,
    concentration: float | None = None,
    min_density: float | None = None,
    design_floor: float | None = None,
) -> EpochPlan:
    """Epoch schedule for a horizon.

    The practical mode scales a geometric profile by small constants tuned for
    simulation-size horizons.  The theoretical mode uses the analysis-order
    lengths and needs the extra constants (arm count, the concentration and
    density constants, and for the robust variant a design eigenvalue floor);
    it is exposed for completeness and is not what the bundled experiments run.

    Robust schedules replace the 4**q growth with a budget-driven floor; if
    that makes the first epoch already cover the horizon the plan degenerates
    to a single pure-exploration epoch.
    """
    if mode not in ("practical", "theoretical"):
        raise ValueError(f"unknown schedule mode {mode!r}")
    if horizon < 2:
        raise ValueError(f"horizon must be at least 2, got {horizon!r}")
    if robust and corruption_budget < 0:
        raise ValueError("corruption budget must be nonnegative")
    lnT = math.log(horizon)
    C = corruption_budget if robust else 0.0

    def epoch_len(q: int) -> int:
        growth = 4.0**q
        if robust and C > 0:
            growth = max(c1 * C ** (2.0 * margin / (2.0 * margin - 1.0)), growth)
        if mode == "practical":
            raw = c0 * growth ** ((2.0 * smoothness + dim) / (2.0 * smoothness)) * lnT ** (
                (2.0 * smoothness + dim) / (margin - 1.0)
            ) + lnT
        else:
            if n_arms is None or concentration is None or min_density is None:
                raise ValueError(
                    "theoretical schedules need n_arms, concentration and min_density"
                )
            spacing = grid_spacing(horizon, smoothness, dim)
            log_cells = math.log(horizon * spacing**-dim)
            raw = (2.0 * n_arms / min_density) * (growth * log_cells / concentration) ** (
                (2.0 * smoothness + dim) / (2.0 * smoothness)
            ) * lnT ** (
                (2.0 * smoothness + dim) / (margin - 1.0)
                - (2.0 * smoothness + dim) / (2.0 * smoothness)
            ) + (n_arms**2 / (2.0 * min_density**2)) * lnT
        return math.ceil(raw)

    # A first epoch that already covers the horizon leaves a single-epoch plan,
    # which the policies treat as pure uniform exploration.  That is the intended
    # degenerate regime when a robust budget is too large for the horizon.
    lengths: list[int] = []
    total = 0
    q = 1
    while total < horizon:
        n = min(epoch_len(q), horizon - total)
        lengths.append(n)
        total += n
        q += 1

    def tol(q: int) -> float:
        t = error_tolerance(
            q,
            horizon,
            smoothness,
            margin,
            dim,
            robust=robust,
            corruption_budget=C,
            epoch_len=lengths[q - 1],
            c2=c2,
        )
        if mode == "theoretical" and robust and C > 0:
            if design_floor is None or min_density is None or n_arms is None:
                raise ValueError("theoretical robust tolerances need design_floor")
            # Swap the practical slack constant for the analysis-order one.
            degree_terms = monomial_count(math.ceil(smoothness) - 1, dim)
            t -= c2 * C * lengths[q - 1] ** (-2.0 * smoothness / (2.0 * smoothness + dim))
            t += (
                2.0
                * math.sqrt(degree_terms)
                / design_floor
                * C
                * (min_density / (4.0 * n_arms) * lengths[q - 1])
                ** (-2.0 * smoothness / (2.0 * smoothness + dim))
            )
        return t

    tolerances = [tol(q) for q in range(1, len(lengths) + 1)]
    return EpochPlan(horizon=horizon, lengths=tuple(lengths), tolerances=tuple(tolerances))
