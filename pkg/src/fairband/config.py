"""Experiment configuration: dataclasses, INI parsing, validation, builders.

An experiment is an environment, a roster of named policies, an optional
attack applied identically to every policy, a seed list and output options.
Configs parse from INI files; presets construct the same dataclasses in
code.  Builders turn specs into per-trajectory factories so trajectory
execution never touches the file format.
"""

from __future__ import annotations

import configparser
import functools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .adversary import (
    Adversary,
    MaskArmAttack,
    NullAdversary,
    RegionSuppressAttack,
    TargetValueAttack,
)
from .core import Policy
from .environments import Environment, LinearEnv, OverlapEnv, SmoothEnv, WineEnv, load_wine
from .linear_policies import (
    FairLinearPolicy,
    ForcedSampleLinearPolicy,
    GreedyLinearPolicy,
    OptimisticLinearPolicy,
    UniformRandomPolicy,
)
from .smooth_policies import FairSmoothPolicy, SimplifiedSmoothPolicy

__all__ = [
    "ConfigError",
    "EnvSpec",
    "PolicySpec",
    "AttackSpec",
    "ExperimentConfig",
    "parse_config",
    "validate_config",
    "build_env",
    "build_policy",
    "build_adversary",
    "policy_family",
    "resolve_attack_window",
]

ENV_KINDS = ("linear", "smooth", "overlap", "wine")
ATTACK_KINDS = ("none", "target_value", "mask_arm", "region_suppress")

# Which context view a policy consumes; only the wine environment offers two.
POLICY_FAMILY = {
    "fair_ols": "linear",
    "robust_fair_ols": "linear",
    "ols_bandit": "linear",
    "greedy": "linear",
    "lin_ucb": "linear",
    "random": "linear",
    "fair_smooth": "smooth",
    "robust_fair_smooth": "smooth",
    "simplified_smooth": "smooth",
}


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


@dataclass(frozen=True)
class EnvSpec:
    kind: str
    n_arms: int = 0  # 0 means the kind's fixed arm count
    dim: int = 0
    noise_sd: float = 0.05
    wine_red: str = ""
    wine_white: str = ""


@dataclass(frozen=True)
class PolicySpec:
    name: str
    kind: str
    params: tuple[tuple[str, object], ...] = ()

    def param_dict(self) -> dict:
        return dict(self.params)


@dataclass(frozen=True)
class AttackSpec:
    kind: str = "none"
    arms: tuple[int, ...] = ()
    target: float = 0.0
    budget: float | str = 0.0  # numeric, or "auto" for window-sized budgets
    window: int | str = "auto"  # rounds the windowed attacks stay live
    depth: float = 1.0
    region: tuple[float, float] = (0.44, 0.56)


@dataclass(frozen=True)
class ExperimentConfig:
    experiment_id: str
    horizon: int
    seeds: tuple[int, ...]
    tau: float
    env: EnvSpec
    policies: tuple[PolicySpec, ...]
    attack: AttackSpec = AttackSpec()
    out_dir: str = "results"
    stride: int = 50
    threads: int = 1
    figures: bool = True


# ---------------------------------------------------------------------------
# INI parsing.


def _parse_value(raw: str) -> object:
    s = raw.strip()
    low = s.lower()
    if low in ("true", "false"):
        return low == "true"
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        pass
    return s


def _parse_seeds(raw: str) -> tuple[int, ...]:
    s = raw.strip()
    try:
        if ":" in s:
            a, b = s.split(":")
            lo, hi = int(a), int(b)
            if hi <= lo:
                raise ValueError
            return tuple(range(lo, hi))
        return tuple(int(p) for p in s.split(",") if p.strip())
    except ValueError:
        raise ConfigError(
            f"seeds must be 'lo:hi' or a comma list of ints, got {raw!r}"
        ) from None


def _parse_arms(raw: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in str(raw).split(",") if str(p).strip())
    except ValueError:
        raise ConfigError(f"arms must be a comma list of ints, got {raw!r}") from None


def parse_config(path: str | Path) -> ExperimentConfig:
    """Read an experiment INI file.

    Sections: [experiment], [env], optional [attack], and one
    [policy:<name>] per roster entry, in file order.  Policy sections carry a
    ``kind`` plus free-form numeric parameters forwarded to the policy
    constructor.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    cp = configparser.ConfigParser()
    try:
        cp.read(path)
    except configparser.Error as e:
        raise ConfigError(f"{path}: {e}") from None
    if "experiment" not in cp:
        raise ConfigError(f"{path}: missing [experiment] section")
    if "env" not in cp:
        raise ConfigError(f"{path}: missing [env] section")

    exp = cp["experiment"]
    env_sec = cp["env"]
    try:
        horizon = exp.getint("horizon")
    except ValueError:
        raise ConfigError(f"{path}: horizon must be an integer") from None
    if horizon is None:
        raise ConfigError(f"{path}: [experiment] needs a horizon")

    env = EnvSpec(
        kind=env_sec.get("kind", ""),
        n_arms=env_sec.getint("arms", 0),
        dim=env_sec.getint("dim", 0),
        noise_sd=env_sec.getfloat("noise_sd", 0.05),
        wine_red=env_sec.get("wine_red", ""),
        wine_white=env_sec.get("wine_white", ""),
    )

    attack = AttackSpec()
    if "attack" in cp:
        a = cp["attack"]
        budget_raw = a.get("budget", "0").strip()
        window_raw = a.get("window", "auto").strip()
        region_raw = a.get("region", "0.44,0.56")
        try:
            region_vals = tuple(float(v) for v in region_raw.split(","))
        except ValueError:
            raise ConfigError(f"{path}: region must be two comma floats") from None
        if len(region_vals) != 2:
            raise ConfigError(f"{path}: region must be two comma floats")
        attack = AttackSpec(
            kind=a.get("kind", "none"),
            arms=_parse_arms(a.get("arms", "")) if a.get("arms", "").strip() else (),
            target=a.getfloat("target", 0.0),
            budget="auto" if budget_raw == "auto" else float(budget_raw),
            window="auto" if window_raw == "auto" else int(window_raw),
            depth=a.getfloat("depth", 1.0),
            region=region_vals,
        )

    policies = []
    for section in cp.sections():
        if not section.startswith("policy:"):
            continue
        name = section.split(":", 1)[1].strip()
        body = cp[section]
        kind = body.get("kind", name)
        params = tuple(
            (k, _parse_value(v)) for k, v in body.items() if k != "kind"
        )
        policies.append(PolicySpec(name=name, kind=kind, params=params))

    config = ExperimentConfig(
        experiment_id=exp.get("id", path.stem),
        horizon=horizon,
        seeds=_parse_seeds(exp.get("seeds", "0:10")),
        tau=exp.getfloat("tau", 0.0),
        env=env,
        policies=tuple(policies),
        attack=attack,
        out_dir=exp.get("out_dir", "results"),
        stride=exp.getint("stride", 50),
        threads=exp.getint("threads", 1),
        figures=exp.getboolean("figures", True),
    )
    validate_config(config)
    return config


# ---------------------------------------------------------------------------
# Validation.


def validate_config(config: ExperimentConfig) -> list[str]:
    """Check a config for consistency; returns resolved settings as lines.

    Raises ConfigError with a precise message on the first problem found.
    """
    if config.horizon < 2:
        raise ConfigError(f"horizon must be at least 2, got {config.horizon}")
    if not config.seeds:
        raise ConfigError("at least one seed is required")
    if len(set(config.seeds)) != len(config.seeds):
        raise ConfigError("seeds contain duplicates")
    if config.tau < 0:
        raise ConfigError(f"audit slack tau must be nonnegative, got {config.tau}")
    if config.stride < 1:
        raise ConfigError(f"stride must be positive, got {config.stride}")
    if config.threads < 1:
        raise ConfigError(f"threads must be positive, got {config.threads}")

    env = config.env
    if env.kind not in ENV_KINDS:
        raise ConfigError(f"unknown environment kind {env.kind!r}, expected one of {ENV_KINDS}")
    if env.kind == "linear":
        if env.n_arms < 2 or env.dim < 1:
            raise ConfigError("linear environment needs arms >= 2 and dim >= 1")
    if env.kind == "wine":
        if not env.wine_red or not env.wine_white:
            raise ConfigError("wine environment needs wine_red and wine_white file paths")
    n_arms = env_arm_count(env)

    if not config.policies:
        raise ConfigError("at least one policy is required")
    names = [p.name for p in config.policies]
    if len(set(names)) != len(names):
        raise ConfigError(f"duplicate policy names in roster: {names}")
    for p in config.policies:
        if p.kind not in POLICY_FAMILY:
            raise ConfigError(
                f"unknown policy kind {p.kind!r} for {p.name!r}, "
                f"expected one of {sorted(POLICY_FAMILY)}"
            )
        for key, val in p.params:
            if not isinstance(val, (int, float, bool)):
                raise ConfigError(
                    f"policy {p.name!r} parameter {key!r} must be numeric, got {val!r}"
                )

    atk = config.attack
    if atk.kind not in ATTACK_KINDS:
        raise ConfigError(f"unknown attack kind {atk.kind!r}, expected one of {ATTACK_KINDS}")
    if atk.kind != "none":
        if isinstance(atk.budget, str) and atk.budget != "auto":
            raise ConfigError(f"attack budget must be a number or 'auto', got {atk.budget!r}")
        if isinstance(atk.window, str) and atk.window != "auto":
            raise ConfigError(f"attack window must be an integer or 'auto', got {atk.window!r}")
        if atk.kind == "target_value":
            if not atk.arms:
                raise ConfigError("target_value attack needs a nonempty arms list")
            if atk.budget == "auto":
                raise ConfigError("target_value attack needs a numeric budget")
        if atk.kind in ("mask_arm", "region_suppress") and len(atk.arms) != 1:
            raise ConfigError(f"{atk.kind} attack targets exactly one arm")
        for a in atk.arms:
            if not 0 <= a < n_arms:
                raise ConfigError(f"attack arm {a} out of range for {n_arms} arms")
        if atk.kind == "region_suppress":
            if env.kind != "overlap":
                raise ConfigError("region_suppress attack requires the overlap environment")
            a, b = atk.region
            if not (0.0 <= a < b <= 1.0):
                raise ConfigError(f"attack region must satisfy 0 <= a < b <= 1, got {atk.region}")
            if atk.depth <= 0:
                raise ConfigError("region_suppress attack needs a positive depth")

    lines = [
        f"id = {config.experiment_id}",
        f"horizon = {config.horizon}",
        f"seeds = {','.join(str(s) for s in config.seeds)}",
        f"tau = {config.tau}",
        f"env.kind = {env.kind}",
        f"env.arms = {n_arms}",
        f"env.noise_sd = {0.0 if env.kind == 'wine' else env.noise_sd}",
        f"attack.kind = {atk.kind}",
        f"policies = {','.join(names)}",
        f"out_dir = {config.out_dir}",
        f"stride = {config.stride}",
        f"threads = {config.threads}",
        f"figures = {config.figures}",
    ]
    return lines


def env_arm_count(env: EnvSpec) -> int:
    if env.kind == "linear":
        return env.n_arms
    if env.kind == "smooth":
        return 4
    if env.kind == "overlap":
        return 2
    if env.kind == "wine":
        return 3
    raise ConfigError(f"unknown environment kind {env.kind!r}")


# ---------------------------------------------------------------------------
# Builders.


@functools.lru_cache(maxsize=8)
def _wine_records_cached(red: str, white: str):
    return load_wine(red, white)


def build_env(spec: EnvSpec, view: str = "linear") -> Environment:
    """Instantiate the environment; ``view`` matters only for wine."""
    if spec.kind == "linear":
        return LinearEnv(spec.n_arms, spec.dim, spec.noise_sd)
    if spec.kind == "smooth":
        return SmoothEnv(spec.noise_sd)
    if spec.kind == "overlap":
        return OverlapEnv(spec.noise_sd)
    if spec.kind == "wine":
        return WineEnv(_wine_records_cached(spec.wine_red, spec.wine_white), view)
    raise ConfigError(f"unknown environment kind {spec.kind!r}")


def policy_family(kind: str) -> str:
    return POLICY_FAMILY[kind]


def build_policy(
    spec: PolicySpec, env: Environment, horizon: int, rng: np.random.Generator
) -> Policy:
    p = spec.param_dict()
    common = dict(n_arms=env.n_arms, dim=env.dim, horizon=horizon, name=spec.name)
    try:
        if spec.kind == "fair_ols":
            return FairLinearPolicy(**common, **p)
        if spec.kind == "robust_fair_ols":
            p.setdefault("assumed_budget", 0.0)
            return FairLinearPolicy(**common, **p)
        if spec.kind == "ols_bandit":
            return ForcedSampleLinearPolicy(**common, **p)
        if spec.kind == "greedy":
            return GreedyLinearPolicy(**common, **p)
        if spec.kind == "lin_ucb":
            return OptimisticLinearPolicy(**common, **p)
        if spec.kind == "random":
            return UniformRandomPolicy(**common)
        box = dict(context_lo=env.context_lo, context_hi=env.context_hi)
        if spec.kind == "fair_smooth":
            return FairSmoothPolicy(**common, **box, **p)
        if spec.kind == "robust_fair_smooth":
            p.setdefault("assumed_budget", 0.0)
            return FairSmoothPolicy(**common, **box, robust=True, **p)
        if spec.kind == "simplified_smooth":
            return SimplifiedSmoothPolicy(**common, **box, **p)
    except TypeError as e:
        raise ConfigError(f"bad parameters for policy {spec.name!r}: {e}") from None
    raise ConfigError(f"unknown policy kind {spec.kind!r}")


def resolve_attack_window(policy: Policy, window: int | str) -> int:
    """Window for timed attacks; 'auto' reads the policy's exploration phase."""
    if isinstance(window, int):
        return window
    if hasattr(policy, "exploration_len"):
        return int(policy.exploration_len)
    if hasattr(policy, "plan"):
        return int(policy.plan.lengths[0])
    raise ConfigError(
        f"attack window 'auto' needs a policy with an exploration phase, "
        f"got {policy.name!r}"
    )


def build_adversary(spec: AttackSpec, env: Environment, policy: Policy) -> Adversary:
    if spec.kind == "none":
        return NullAdversary()
    if spec.kind == "target_value":
        return TargetValueAttack(float(spec.budget), frozenset(spec.arms), spec.target)
    window = resolve_attack_window(policy, spec.window)
    if spec.kind == "mask_arm":
        magnitude = 2.0 * env.reward_bound + 1.0
        budget = window * magnitude if spec.budget == "auto" else float(spec.budget)
        return MaskArmAttack(budget, spec.arms[0], window, magnitude)
    if spec.kind == "region_suppress":
        budget = window * spec.depth if spec.budget == "auto" else float(spec.budget)
        region = spec.region

        def weight(v: float) -> float:
            return OverlapEnv.suppression_weight(v, region)

        return RegionSuppressAttack(budget, spec.arms[0], window, spec.depth, weight)
    raise ConfigError(f"unknown attack kind {spec.kind!r}")
