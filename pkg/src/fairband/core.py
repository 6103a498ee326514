"""Round loop and trajectory execution.

Every round runs the same fixed sequence: the environment samples a context,
the policy commits an action distribution, an arm is drawn from it, the
adversary sees the round and may corrupt the reward, the policy observes the
corrupted reward for the drawn arm only, and the auditor scores the committed
distribution against the true means.  Randomness is split into four named
streams seeded from (run_seed, stream index) so that context and noise
sequences are identical across policies run under matched seeds.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .adversary import Adversary, NullAdversary
from .environments import Environment
from .metrics import RunResult, regret_increment, unfair_decision

__all__ = [
    "Policy",
    "PolicyError",
    "RoundRecord",
    "RngStreams",
    "make_streams",
    "check_distribution",
    "run_round",
    "run_trajectory",
]

# Stream indices appended to the run seed; order is part of the format.
STREAM_CONTEXT = 0
STREAM_NOISE = 1
STREAM_POLICY = 2
STREAM_ADVERSARY = 3

# Action distributions may drift from unit mass by at most this before the
# run is aborted instead of silently renormalized.
MASS_TOL = 1e-9


class PolicyError(RuntimeError):
    """A policy emitted an invalid action distribution."""


class Policy:
    """Base policy contract.

    ``distribution`` commits this round's action probabilities before the
    arm is drawn; ``observe`` feeds back the (possibly corrupted) reward of
    the drawn arm only.  Policies never see true means or other arms'
    rewards.
    """

    name: str = "policy"

    def __init__(self, n_arms: int, dim: int, horizon: int):
        if n_arms < 1 or dim < 1 or horizon < 1:
            raise ValueError("need n_arms, dim and horizon all >= 1")
        self.n_arms = n_arms
        self.dim = dim
        self.horizon = horizon

    def distribution(self, x: np.ndarray, t: int) -> np.ndarray:
        raise NotImplementedError

    def observe(self, x: np.ndarray, arm: int, reward: float, t: int) -> None:
        pass

    # Helpers shared by subclasses.
    def _uniform(self) -> np.ndarray:
        return np.full(self.n_arms, 1.0 / self.n_arms)

    def _point_mass(self, arm: int) -> np.ndarray:
        p = np.zeros(self.n_arms)
        p[arm] = 1.0
        return p

    @staticmethod
    def uniform_over(members: Sequence[int], n_arms: int) -> np.ndarray:
        p = np.zeros(n_arms)
        p[list(members)] = 1.0 / len(members)
        return p


def check_distribution(probs: np.ndarray, n_arms: int) -> np.ndarray:
    """Validate an action distribution, normalizing away float drift only."""
    p = np.asarray(probs, dtype=float)
    if p.shape != (n_arms,):
        raise PolicyError(f"distribution has shape {p.shape}, expected ({n_arms},)")
    if not np.all(np.isfinite(p)):
        raise PolicyError(f"distribution contains non-finite entries: {p!r}")
    if np.any(p < 0):
        raise PolicyError(f"distribution has negative entries: {p!r}")
    mass = p.sum()
    if abs(mass - 1.0) > MASS_TOL:
        raise PolicyError(f"distribution mass {mass!r} is not 1 within {MASS_TOL}")
    return p / mass


@dataclass(frozen=True)
class RoundRecord:
    """Everything observable about one executed round."""

    t: int
    context: np.ndarray
    probs: np.ndarray
    arm: int
    true_means: np.ndarray
    noise: float
    corruption: float
    reward_observed: float
    regret_inc: float
    unfair: bool


@dataclass(frozen=True)
class RngStreams:
    context: np.random.Generator
    noise: np.random.Generator
    policy: np.random.Generator
    adversary: np.random.Generator


def make_streams(run_seed: int) -> RngStreams:
    """Independent per-purpose generators derived from one run seed."""

    def gen(k: int) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence([run_seed, k])))

    return RngStreams(
        context=gen(STREAM_CONTEXT),
        noise=gen(STREAM_NOISE),
        policy=gen(STREAM_POLICY),
        adversary=gen(STREAM_ADVERSARY),
    )


def run_round(
    t: int,
    sampler,
    policy: Policy,
    adversary: Adversary,
    tau: float,
    noise_sd: float,
    streams: RngStreams,
) -> RoundRecord:
    """Execute one round in the fixed order; see the module docstring."""
    x, means = sampler.next(t)
    probs = check_distribution(policy.distribution(x, t), policy.n_arms)
    arm = int(streams.policy.choice(policy.n_arms, p=probs))
    # Exactly one noise draw per round; a zero scale yields exactly 0.0 while
    # still consuming one draw, keeping streams aligned across environments.
    noise = float(streams.noise.normal(0.0, noise_sd))
    corruption = adversary.corrupt(t, x, arm, float(means[arm]))
    observed = float(means[arm]) + corruption + noise
    policy.observe(x, arm, observed, t)
    return RoundRecord(
        t=t,
        context=x,
        probs=probs,
        arm=arm,
        true_means=means,
        noise=noise,
        corruption=corruption,
        reward_observed=observed,
        regret_inc=regret_increment(means, arm),
        unfair=unfair_decision(probs, means, tau),
    )


@dataclass(frozen=True)
class TrajectorySpec:
    """Everything needed to run one seeded trajectory."""

    env: Environment
    horizon: int
    tau: float
    policy_factory: Callable[[Environment, int, np.random.Generator], Policy]
    adversary_factory: Callable[[Environment, Policy], Adversary] | None = None


def run_trajectory(
    spec: TrajectorySpec,
    run_seed: int,
    keep_records: bool = False,
) -> tuple[RunResult, list[RoundRecord] | None]:
    """Run one full trajectory under one seed.

    Returns the cumulative result and, when asked, the per-round records.
    The adversary's spend is checked against its budget before returning.
    """
    t_start = time.perf_counter()
    streams = make_streams(run_seed)
    sampler = spec.env.start(streams.context)
    policy = spec.policy_factory(spec.env, spec.horizon, streams.policy)
    adversary = (
        spec.adversary_factory(spec.env, policy)
        if spec.adversary_factory is not None
        else NullAdversary()
    )
    T = spec.horizon
    cum_regret = np.empty(T)
    cum_unfair = np.empty(T, dtype=np.int64)
    records: list[RoundRecord] | None = [] if keep_records else None
    total_regret = 0.0
    total_unfair = 0
    for t in range(1, T + 1):
        rec = run_round(t, sampler, policy, adversary, spec.tau, spec.env.noise_sd, streams)
        total_regret += rec.regret_inc
        total_unfair += int(rec.unfair)
        cum_regret[t - 1] = total_regret
        cum_unfair[t - 1] = total_unfair
        if records is not None:
            records.append(rec)
    if adversary.spent > adversary.budget + 1e-9:
        raise RuntimeError(
            f"adversary overspent: {adversary.spent!r} of budget {adversary.budget!r}"
        )
    result = RunResult(
        policy=policy.name,
        seed=run_seed,
        cum_regret=cum_regret,
        cum_unfair=cum_unfair,
        corruption_spent=adversary.spent,
        wall_time=time.perf_counter() - t_start,
    )
    return result, records
