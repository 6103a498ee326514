"""Experiment execution: trajectories across seeds and policies, plus output.

Runs every (policy, seed) pair of a config, aggregates per policy, and writes
a summary CSV, per-trajectory CSVs and optional figures under the config's
output directory.  Worker processes rebuild environments and policies from
the picklable config, so parallel and serial execution produce identical
numbers; results are keyed and sorted before aggregation either way.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .config import (
    ExperimentConfig,
    build_adversary,
    build_env,
    build_policy,
    policy_family,
)
from .core import TrajectorySpec, run_trajectory
from .metrics import PolicySummary, RunResult, summarize

__all__ = ["SuiteResult", "run_suite", "run_pair", "write_summary_csv", "default_threads"]


@dataclass(frozen=True)
class SuiteResult:
    config: ExperimentConfig
    summaries: tuple[PolicySummary, ...]  # roster order
    results: dict[str, tuple[RunResult, ...]]  # policy name -> per-seed, seed order

    def summary_for(self, policy: str) -> PolicySummary:
        for s in self.summaries:
            if s.policy == policy:
                return s
        raise KeyError(policy)


def default_threads() -> int:
    raw = os.environ.get("FAIRBAND_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _trajectory_spec(config: ExperimentConfig, policy_index: int) -> TrajectorySpec:
    spec = config.policies[policy_index]
    env = build_env(config.env, view=policy_family(spec.kind))
    return TrajectorySpec(
        env=env,
        horizon=config.horizon,
        tau=config.tau,
        policy_factory=lambda e, horizon, rng: build_policy(spec, e, horizon, rng),
        adversary_factory=(
            None
            if config.attack.kind == "none"
            else lambda e, policy: build_adversary(config.attack, e, policy)
        ),
    )


def run_pair(config: ExperimentConfig, policy_index: int, seed: int) -> RunResult:
    """Run one (policy, seed) trajectory of an experiment."""
    result, _ = run_trajectory(_trajectory_spec(config, policy_index), seed)
    return result


def _worker(args: tuple[ExperimentConfig, int, int]) -> tuple[int, int, RunResult]:
    config, policy_index, seed = args
    return policy_index, seed, run_pair(config, policy_index, seed)


def run_suite(config: ExperimentConfig, write_output: bool = True) -> SuiteResult:
    """Run the full seed-by-policy grid and aggregate.

    With ``write_output`` the summary CSV, trajectory CSVs and figures land
    under ``config.out_dir``; otherwise results are only returned.
    """
    tasks = [
        (config, pi, seed)
        for pi in range(len(config.policies))
        for seed in config.seeds
    ]
    collected: dict[tuple[int, int], RunResult] = {}
    if config.threads > 1:
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            for pi, seed, result in pool.map(_worker, tasks):
                collected[(pi, seed)] = result
    else:
        for task in tasks:
            pi, seed, result = _worker(task)
            collected[(pi, seed)] = result

    results: dict[str, tuple[RunResult, ...]] = {}
    summaries = []
    for pi, spec in enumerate(config.policies):
        per_seed = tuple(collected[(pi, seed)] for seed in config.seeds)
        results[spec.name] = per_seed
        summaries.append(summarize(spec.name, list(per_seed)))

    suite = SuiteResult(config=config, summaries=tuple(summaries), results=results)
    if write_output:
        write_outputs(suite)
    return suite


# ---------------------------------------------------------------------------
# Output.


def _sample_rounds(horizon: int, stride: int) -> list[int]:
    rounds = [1]
    rounds += list(range(stride, horizon + 1, stride))
    if rounds[-1] != horizon:
        rounds.append(horizon)
    # Dedup while preserving order; stride 1 makes both branches overlap.
    seen: set[int] = set()
    out = []
    for t in rounds:
        if t not in seen:
            seen.add(t)
            out.append(t)
    return out


def write_trajectory_csv(path: Path, result: RunResult, stride: int) -> None:
    horizon = result.cum_regret.shape[0]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "cum_regret", "cum_unfair"])
        for t in _sample_rounds(horizon, stride):
            w.writerow([t, f"{result.cum_regret[t - 1]:.10g}", int(result.cum_unfair[t - 1])])


def write_summary_csv(path: Path, experiment_id: str, summaries) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(
            ["experiment", "policy", "runs", "regret_mean", "regret_sd", "unfair_mean", "unfair_sd"]
        )
        for s in summaries:
            w.writerow(
                [
                    experiment_id,
                    s.policy,
                    s.runs,
                    f"{s.regret_mean:.10g}",
                    f"{s.regret_sd:.10g}",
                    f"{s.unfair_mean:.10g}",
                    f"{s.unfair_sd:.10g}",
                ]
            )


def write_outputs(suite: SuiteResult) -> None:
    config = suite.config
    out = Path(config.out_dir)
    traj_dir = out / "trajectories"
    traj_dir.mkdir(parents=True, exist_ok=True)
    write_summary_csv(out / "summary.csv", config.experiment_id, suite.summaries)
    for name, per_seed in suite.results.items():
        for result in per_seed:
            write_trajectory_csv(
                traj_dir / f"traj_{name}_{result.seed}.csv", result, config.stride
            )
    if config.figures:
        from .plots import render_figures

        render_figures(suite, out)
