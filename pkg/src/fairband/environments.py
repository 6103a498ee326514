"""Benchmark environments: context distributions and arm reward surfaces.

An environment owns the arm count, context dimension, reward functions and
noise level.  Trajectory state (the position in a fixed record permutation,
for the wine data) lives in a per-trajectory sampler so environment objects
stay immutable and shareable across parallel runs.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "Environment",
    "ContextSampler",
    "LinearEnv",
    "SmoothEnv",
    "OverlapEnv",
    "WineEnv",
    "WineRecords",
    "load_wine",
    "wine_reward_curves",
    "embed_components",
]


class ContextSampler:
    """Per-trajectory context source; default draws i.i.d. from the environment."""

    def __init__(self, env: "Environment", rng: np.random.Generator):
        self._env = env
        self._rng = rng

    def next(self, t: int) -> tuple[np.ndarray, np.ndarray]:
        """Context and true arm means for round t."""
        x = self._env.sample_context(self._rng)
        return x, self._env.true_means(x)


class Environment:
    """Base environment contract.

    Subclasses set n_arms, dim, noise_sd, reward_bound (a uniform bound on
    |true mean| used to size masking corruptions) and the context box, and
    implement sample_context plus true_means.
    """

    n_arms: int
    dim: int
    noise_sd: float
    reward_bound: float
    context_lo: np.ndarray
    context_hi: np.ndarray

    def sample_context(self, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def true_means(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def start(self, rng: np.random.Generator) -> ContextSampler:
        return ContextSampler(self, rng)


class LinearEnv(Environment):
    """Linear rewards with banded weights on uniform contexts in [-1, 1]^dim.

    Arm k weights dimension j by 2 when j = k mod dim, +1 when j = (k+1) mod
    dim and -1 when j = (k-1) mod dim, contributions summed when indices
    collide, plus an intercept 0.5 * sin(2*pi*k / n_arms).  Neighboring arms
    overlap in one dimension, so ranking them takes real estimation effort.
    """

    def __init__(self, n_arms: int, dim: int, noise_sd: float = 0.05):
        if n_arms < 2 or dim < 1:
            raise ValueError(f"need n_arms >= 2 and dim >= 1, got {n_arms}, {dim}")
        self.n_arms = n_arms
        self.dim = dim
        self.noise_sd = float(noise_sd)
        W = np.zeros((n_arms, dim))
        for k in range(n_arms):
            W[k, k % dim] += 2.0
            W[k, (k + 1) % dim] += 1.0
            W[k, (k - 1) % dim] -= 1.0
        self.weights = W
        self.intercepts = 0.5 * np.sin(2.0 * np.pi * np.arange(n_arms) / n_arms)
        self.reward_bound = float(np.max(np.abs(W).sum(axis=1) + np.abs(self.intercepts)))
        self.context_lo = -np.ones(dim)
        self.context_hi = np.ones(dim)

    def sample_context(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(-1.0, 1.0, self.dim)

    def true_means(self, x: np.ndarray) -> np.ndarray:
        return self.weights @ x + self.intercepts


class SmoothEnv(Environment):
    """Four Gaussian reward bumps at the quadrant centers of [-1, 1]^2."""

    CENTERS = np.array([[0.5, 0.5], [-0.5, 0.5], [-0.5, -0.5], [0.5, -0.5]])

    def __init__(self, noise_sd: float = 0.05):
        self.n_arms = 4
        self.dim = 2
        self.noise_sd = float(noise_sd)
        self.reward_bound = 1.0
        self.context_lo = -np.ones(2)
        self.context_hi = np.ones(2)

    def sample_context(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(-1.0, 1.0, 2)

    def true_means(self, x: np.ndarray) -> np.ndarray:
        d = self.CENTERS - x
        return np.exp(-np.einsum("ij,ij->i", d, d))


# ---------------------------------------------------------------------------
# Two-arm overlap environment.
#
# Built from the classic smooth clamp: the bump exp(-1/((1/2 - s)(s - 1/4)))
# supported on (1/4, 1/2), integrated from the right and normalized, gives a
# C-infinity function that is exactly 1 below 1/4 and exactly 0 above 1/2.
# Reward curves assembled from it are infinitely smooth while being exactly
# constant on chosen intervals, which is what makes a genuine tie region with
# positive measure possible.

_CLAMP_GRID = 8193


def _clamp_table() -> tuple[np.ndarray, np.ndarray]:
    s = np.linspace(0.25, 0.5, _CLAMP_GRID)
    inner = (0.5 - s) * (s - 0.25)
    vals = np.zeros_like(s)
    pos = inner > 0
    vals[pos] = np.exp(-1.0 / inner[pos])
    # Right tail integral via the trapezoid rule, normalized to start at 1.
    steps = np.diff(s) * 0.5 * (vals[1:] + vals[:-1])
    tail = np.concatenate([[0.0], np.cumsum(steps[::-1])])[::-1]
    return s, tail / tail[0]


_CLAMP_S, _CLAMP_V = _clamp_table()


def _smooth_clamp(s: np.ndarray) -> np.ndarray:
    """1 for s <= 1/4, 0 for s >= 1/2, smooth monotone decrease between."""
    s = np.asarray(s, dtype=float)
    out = np.empty_like(s)
    lo = s <= 0.25
    hi = s >= 0.5
    mid = ~lo & ~hi
    out[lo] = 1.0
    out[hi] = 0.0
    out[mid] = np.interp(s[mid], _CLAMP_S, _CLAMP_V)
    return out


def _rise(x: np.ndarray, a: float, b: float) -> np.ndarray:
    """Smooth step: exactly 0 for x <= a, exactly 1 for x >= b."""
    return 1.0 - _smooth_clamp(0.25 + 0.25 * (np.asarray(x, dtype=float) - a) / (b - a))


class OverlapEnv(Environment):
    """Two arms on [0, 1] whose reward curves tie on a fat interval.

    Arm 1 climbs steeply, flattens into a shallow shoulder, and joins a
    shared plateau of 0.6 on [0.42, 0.58]; arm 0 is its mirror image.  The
    tie holds exactly (bitwise) on the plateau, each arm is strictly better
    on its own side, and both curves are infinitely smooth.  On the plateau
    no preference is justified, which is what the audit criterion stresses;
    the shoulder means the advantage fades gradually on the approach, so a
    slightly displaced elimination boundary is cheap in reward but visible
    to the audit.
    """

    PLATEAU = (0.42, 0.58)

    def __init__(self, noise_sd: float = 0.05):
        self.n_arms = 2
        self.dim = 1
        self.noise_sd = float(noise_sd)
        self.reward_bound = 1.0
        self.context_lo = np.zeros(1)
        self.context_hi = np.ones(1)

    @staticmethod
    def curve(x: np.ndarray, arm: int) -> np.ndarray:
        """Reward of one arm at scalar positions x."""
        x = np.asarray(x, dtype=float)
        pos = 1.0 - x if arm == 0 else x
        return (
            0.2
            + 0.37 * _rise(pos, 0.06, 0.30)
            + 0.03 * _rise(pos, 0.30, 0.42)
            + 0.4 * _rise(pos, 0.58, 0.94)
        )

    def sample_context(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(0.0, 1.0, 1)

    def true_means(self, x: np.ndarray) -> np.ndarray:
        return np.array([float(self.curve(x[0], 0)), float(self.curve(x[0], 1))])

    @staticmethod
    def suppression_weight(x: float, region: tuple[float, float], feather: float = 0.02) -> float:
        """Smooth bump equal to 1 on the interior of region, 0 outside it.

        Feathered edges keep a corruption built from this weight infinitely
        smooth, so the corrupted surface shows no kink a fit could flag.
        """
        a, b = region
        w = _rise(np.asarray([x]), a, a + feather) * (1.0 - _rise(np.asarray([x]), b - feather, b))
        return float(w[0])


# ---------------------------------------------------------------------------
# Wine quality data.

WINE_COLUMNS = [
    "fixed acidity",
    "volatile acidity",
    "citric acid",
    "residual sugar",
    "chlorides",
    "free sulfur dioxide",
    "total sulfur dioxide",
    "density",
    "pH",
    "sulphates",
    "alcohol",
    "quality",
]


@dataclass(frozen=True)
class WineRecords:
    """Merged wine records: standardized features plus integer quality scores."""

    features: np.ndarray  # (n, 11), each column zero mean unit variance
    quality: np.ndarray  # (n,) ints
    n_red: int
    n_white: int


def _read_wine_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter=";")
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        header = [h.strip().strip('"') for h in header]
        if header != WINE_COLUMNS:
            raise ValueError(
                f"{path}: header {header!r} does not match the expected wine columns"
            )
        feats: list[list[float]] = []
        quals: list[int] = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(WINE_COLUMNS):
                raise ValueError(f"{path}:{lineno}: expected {len(WINE_COLUMNS)} fields, got {len(row)}")
            try:
                vals = [float(v) for v in row]
            except ValueError as e:
                raise ValueError(f"{path}:{lineno}: {e}") from None
            feats.append(vals[:-1])
            quals.append(int(round(vals[-1])))
    if not feats:
        raise ValueError(f"{path}: no data rows")
    return np.array(feats), np.array(quals, dtype=np.int64)


def load_wine(red_path: str | Path, white_path: str | Path) -> WineRecords:
    """Load and merge both wine files, standardizing each feature column."""
    red_X, red_q = _read_wine_csv(red_path)
    white_X, white_q = _read_wine_csv(white_path)
    X = np.vstack([red_X, white_X])
    sd = X.std(axis=0)
    if np.any(sd == 0):
        raise ValueError("constant feature column in wine data")
    Z = (X - X.mean(axis=0)) / sd
    return WineRecords(
        features=Z,
        quality=np.concatenate([red_q, white_q]),
        n_red=red_X.shape[0],
        n_white=white_X.shape[0],
    )


def wine_reward_curves(quality: np.ndarray) -> np.ndarray:
    """Per-agent rewards from a quality score, shape (n, 3).

    Agent 0 rewards high quality (logistic ramp up around 6), agent 2 rewards
    low quality (the mirrored ramp), agent 1 their product, peaking mid-scale.
    All lie in [0, 2].
    """
    q = np.asarray(quality, dtype=float)
    up = 2.0 / (1.0 + np.exp(-(q - 6.0)))
    down = 2.0 / (1.0 + np.exp(q - 6.0))
    return np.stack([up, up * down, down], axis=-1)


def embed_components(Z: np.ndarray, out_dim: int) -> np.ndarray:
    """Top principal directions of standardized features, sign-fixed.

    Deterministic replacement for a learned low-dimensional feature map: rows
    are orthonormal eigenvectors of the covariance in decreasing eigenvalue
    order, each flipped so its largest-magnitude loading is positive.
    """
    n = Z.shape[0]
    cov = (Z.T @ Z) / n
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals)[::-1][:out_dim]
    comps = evecs[:, order].T
    for i in range(comps.shape[0]):
        j = int(np.argmax(np.abs(comps[i])))
        if comps[i, j] < 0:
            comps[i] = -comps[i]
    return comps


class _WineSampler(ContextSampler):
    """Cycles through a fixed seeded permutation of the records."""

    def __init__(self, env: "WineEnv", rng: np.random.Generator):
        self._env = env
        self._perm = rng.permutation(env.contexts.shape[0])

    def next(self, t: int) -> tuple[np.ndarray, np.ndarray]:
        i = self._perm[(t - 1) % self._perm.shape[0]]
        return self._env.contexts[i], self._env.means[i]


class WineEnv(Environment):
    """Three preference agents scored against real wine records.

    Rewards are deterministic functions of the record's quality score, so the
    noise level is zero and every regret unit reflects the decision rule, not
    sampling luck.  The ``view`` controls what the policies see as context:
    the full standardized 11-dim features ("linear") or a fixed 3-dim
    principal-component embedding mapped to the unit cube ("smooth").
    Contexts arrive by cycling a seeded permutation of the records.
    """

    def __init__(self, records: WineRecords, view: str = "linear"):
        if view not in ("linear", "smooth"):
            raise ValueError(f"unknown wine view {view!r}")
        self.view = view
        self.records = records
        self.n_arms = 3
        self.noise_sd = 0.0
        self.reward_bound = 2.0
        self.means = wine_reward_curves(records.quality)
        if view == "linear":
            self.dim = records.features.shape[1]
            self.contexts = records.features
            self.context_lo = self.contexts.min(axis=0)
            self.context_hi = self.contexts.max(axis=0)
        else:
            self.dim = 3
            comps = embed_components(records.features, 3)
            proj = records.features @ comps.T
            lo, hi = proj.min(axis=0), proj.max(axis=0)
            self.contexts = (proj - lo) / (hi - lo)
            self.context_lo = np.zeros(3)
            self.context_hi = np.ones(3)
        self.contexts.setflags(write=False)

    def sample_context(self, rng: np.random.Generator) -> np.ndarray:
        raise RuntimeError("wine contexts come from the record permutation, use start()")

    def true_means(self, x: np.ndarray) -> np.ndarray:
        raise RuntimeError("wine rewards attach to records, not raw contexts")

    def start(self, rng: np.random.Generator) -> ContextSampler:
        return _WineSampler(self, rng)
