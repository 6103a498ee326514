"""Fairness-aware contextual bandit simulations with corruption and auditing."""

from .adversary import (
    Adversary,
    MaskArmAttack,
    NullAdversary,
    RegionSuppressAttack,
    TargetValueAttack,
)
from .chaining import candidate_set, chain_component_of_max, eps_linked
from .config import (
    AttackSpec,
    ConfigError,
    EnvSpec,
    ExperimentConfig,
    PolicySpec,
    build_adversary,
    build_env,
    build_policy,
    parse_config,
    validate_config,
)
from .core import (
    Policy,
    PolicyError,
    RoundRecord,
    TrajectorySpec,
    make_streams,
    run_round,
    run_trajectory,
)
from .environments import (
    Environment,
    LinearEnv,
    OverlapEnv,
    SmoothEnv,
    WineEnv,
    load_wine,
    wine_reward_curves,
)
from .estimators import (
    InsufficientSupportError,
    LocalPolyFit,
    local_poly_estimate,
    monomial_count,
    ols_fit,
    poly_degree,
)
from .gridding import (
    EpochPlan,
    GridLattice,
    bandwidth_for,
    build_epoch_plan,
    error_tolerance,
    grid_spacing,
    make_lattice,
)
from .harness import SuiteResult, run_pair, run_suite
from .linear_policies import (
    FairLinearPolicy,
    ForcedSampleLinearPolicy,
    GreedyLinearPolicy,
    OptimisticLinearPolicy,
    UniformRandomPolicy,
)
from .metrics import PolicySummary, RunResult, regret_increment, summarize, unfair_decision
from .presets import describe_presets, make_preset, preset_names
from .smooth_policies import FairSmoothPolicy, SimplifiedSmoothPolicy

__version__ = "0.1.0"
