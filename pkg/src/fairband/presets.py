"""Canned experiment configurations.

Each preset fixes an environment, roster, horizon and (where relevant) an
attack, matching the benchmark scenarios the package ships with.  Presets
return ordinary ExperimentConfig values, so anything here can also be
expressed as an INI file.
"""

from __future__ import annotations

import os
from dataclasses import replace

from .config import AttackSpec, ConfigError, EnvSpec, ExperimentConfig, PolicySpec

__all__ = ["PRESETS", "preset_names", "describe_presets", "make_preset"]

# Schedule and screening constants: synthetic surfaces vs the wine data.
SMOOTH_SYNTH = (("c0", 0.2), ("c1", 0.03), ("c2", 0.3))
SMOOTH_WINE = (("c0", 0.15), ("c1", 0.008), ("c2", 0.05))
LINEAR_WINE = (("explore_scale", 50.0), ("tol_scale", 5.0), ("screen_width", 0.8))


def _linear_roster(robust_budget: float | None = None) -> list[PolicySpec]:
    roster = []
    if robust_budget is not None:
        roster.append(
            PolicySpec("robust_fair_ols", "robust_fair_ols", (("assumed_budget", robust_budget),))
        )
    roster += [
        PolicySpec("fair_ols", "fair_ols"),
        PolicySpec("ols_bandit", "ols_bandit"),
        PolicySpec("greedy", "greedy"),
        PolicySpec("lin_ucb", "lin_ucb"),
        PolicySpec("random", "random"),
    ]
    return roster


def _smooth_roster(constants, robust_budget: float | None = None) -> list[PolicySpec]:
    roster = []
    if robust_budget is not None:
        roster.append(
            PolicySpec(
                "robust_fair_smooth",
                "robust_fair_smooth",
                (("assumed_budget", robust_budget),) + constants,
            )
        )
    roster += [
        PolicySpec("fair_smooth", "fair_smooth", constants[:1]),
        PolicySpec("simplified_smooth", "simplified_smooth"),
        PolicySpec("random", "random"),
    ]
    return roster


def _wine_env(wine_red: str, wine_white: str) -> EnvSpec:
    return EnvSpec(kind="wine", wine_red=wine_red, wine_white=wine_white)


def make_preset(
    name: str,
    out_dir: str | None = None,
    seeds: tuple[int, ...] | None = None,
    wine_red: str | None = None,
    wine_white: str | None = None,
) -> ExperimentConfig:
    """Build a preset config, optionally overriding output dir and seeds."""
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}, expected one of {preset_names()}")
    red = wine_red or os.environ.get("FAIRBAND_WINE_RED", "data/winequality-red.csv")
    white = wine_white or os.environ.get("FAIRBAND_WINE_WHITE", "data/winequality-white.csv")
    config = PRESETS[name][1](red, white)
    if out_dir is not None:
        config = replace(config, out_dir=out_dir)
    if seeds is not None:
        config = replace(config, seeds=tuple(seeds))
    return config


def _linear_benign(red: str, white: str) -> ExperimentConfig:
    return ExperimentConfig(
        experiment_id="linear-benign",
        horizon=5000,
        seeds=tuple(range(10)),
        tau=0.0,
        env=EnvSpec(kind="linear", n_arms=10, dim=10, noise_sd=0.05),
        policies=tuple(_linear_roster()),
        out_dir="results/linear-benign",
    )


def _smooth_benign(red: str, white: str) -> ExperimentConfig:
    return ExperimentConfig(
        experiment_id="smooth-benign",
        horizon=5000,
        seeds=tuple(range(10)),
        tau=0.0,
        env=EnvSpec(kind="smooth", noise_sd=0.05),
        policies=tuple(_smooth_roster(SMOOTH_SYNTH)),
        out_dir="results/smooth-benign",
    )


def _linear_attack(red: str, white: str) -> ExperimentConfig:
    return ExperimentConfig(
        experiment_id="linear-attack",
        horizon=10000,
        seeds=tuple(range(10)),
        tau=0.0,
        env=EnvSpec(kind="linear", n_arms=10, dim=10, noise_sd=0.05),
        policies=tuple(_linear_roster(robust_budget=200.0)),
        attack=AttackSpec(
            kind="target_value", arms=(0, 1, 2, 3, 4), target=-4.0, budget=200.0
        ),
        out_dir="results/linear-attack",
    )


def _smooth_attack(red: str, white: str) -> ExperimentConfig:
    return ExperimentConfig(
        experiment_id="smooth-attack",
        horizon=10000,
        seeds=tuple(range(10)),
        tau=0.0,
        env=EnvSpec(kind="smooth", noise_sd=0.05),
        policies=tuple(_smooth_roster(SMOOTH_SYNTH, robust_budget=200.0)),
        attack=AttackSpec(kind="target_value", arms=(0, 1), target=-0.1, budget=200.0),
        out_dir="results/smooth-attack",
    )


def _wine_roster(robust_budget: float | None = None) -> tuple[PolicySpec, ...]:
    roster = []
    if robust_budget is not None:
        roster += [
            PolicySpec(
                "robust_fair_ols",
                "robust_fair_ols",
                LINEAR_WINE
                + (
                    ("assumed_budget", robust_budget),
                    ("robust_pad", 2.0),
                    ("budget_drag", 0.01),
                ),
            ),
            PolicySpec(
                "robust_fair_smooth",
                "robust_fair_smooth",
                (("assumed_budget", robust_budget),) + SMOOTH_WINE,
            ),
        ]
    roster += [
        PolicySpec("fair_ols", "fair_ols", LINEAR_WINE),
        PolicySpec("ols_bandit", "ols_bandit", (("screen_width", 0.8),)),
        PolicySpec("greedy", "greedy"),
        PolicySpec("lin_ucb", "lin_ucb"),
        PolicySpec("fair_smooth", "fair_smooth", SMOOTH_WINE[:1]),
        PolicySpec("simplified_smooth", "simplified_smooth"),
        PolicySpec("random", "random"),
    ]
    return tuple(roster)


def _wine_benign(red: str, white: str) -> ExperimentConfig:
    return ExperimentConfig(
        experiment_id="wine-benign",
        horizon=5000,
        seeds=tuple(range(10)),
        tau=0.01,
        env=_wine_env(red, white),
        policies=_wine_roster(),
        out_dir="results/wine-benign",
    )


def _wine_attack(red: str, white: str) -> ExperimentConfig:
    return ExperimentConfig(
        experiment_id="wine-attack",
        horizon=5000,
        seeds=tuple(range(10)),
        tau=0.01,
        env=_wine_env(red, white),
        policies=_wine_roster(robust_budget=200.0),
        attack=AttackSpec(kind="target_value", arms=(0, 2), target=0.0, budget=200.0),
        out_dir="results/wine-attack",
    )


def _overlap_covert(red: str, white: str) -> ExperimentConfig:
    return ExperimentConfig(
        experiment_id="overlap-covert",
        horizon=20000,
        seeds=tuple(range(6)),
        tau=0.0,
        env=EnvSpec(kind="overlap", noise_sd=0.05),
        policies=(PolicySpec("fair_smooth", "fair_smooth", SMOOTH_SYNTH[:1]),),
        attack=AttackSpec(
            kind="region_suppress",
            arms=(0,),
            budget="auto",
            window="auto",
            depth=1.0,
            region=(0.38, 0.58),
        ),
        out_dir="results/overlap-covert",
    )


PRESETS = {
    "linear-benign": (
        "Linear rewards, 10 arms, no corruption: fair policy vs standard baselines.",
        _linear_benign,
    ),
    "smooth-benign": (
        "Smooth rewards, 4 arms, no corruption: epoch policy vs coarse binning.",
        _smooth_benign,
    ),
    "linear-attack": (
        "Linear rewards under a reward-targeting attack with a 200 budget.",
        _linear_attack,
    ),
    "smooth-attack": (
        "Smooth rewards under a reward-targeting attack with a 200 budget.",
        _smooth_attack,
    ),
    "wine-benign": (
        "Wine quality data, three preference agents, no corruption.",
        _wine_benign,
    ),
    "wine-attack": (
        "Wine quality data under an attack zeroing two agents' rewards.",
        _wine_attack,
    ),
    "overlap-covert": (
        "Two-arm tie region under a smooth covert suppression of one arm.",
        _overlap_covert,
    ),
}


def preset_names() -> list[str]:
    return sorted(PRESETS)


def describe_presets() -> list[tuple[str, str]]:
    return [(name, PRESETS[name][0]) for name in sorted(PRESETS)]
