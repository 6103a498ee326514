"""Corruption shapes and the all-or-nothing budget gate."""

import numpy as np
import pytest

from fairband.adversary import (
    MaskArmAttack,
    NullAdversary,
    RegionSuppressAttack,
    TargetValueAttack,
)
from fairband.environments import OverlapEnv

X = np.zeros(1)


def test_null_never_corrupts():
    adv = NullAdversary()
    assert adv.corrupt(1, X, 0, 5.0) == 0.0
    assert adv.spent == 0.0


def test_target_value_offsets_to_target():
    adv = TargetValueAttack(budget=100.0, vulnerable_arms=frozenset({1, 3}), target=-4.0)
    assert adv.corrupt(1, X, 1, 2.5) == -6.5
    assert adv.corrupt(2, X, 0, 2.5) == 0.0  # arm not vulnerable
    assert adv.spent == 6.5


def test_budget_gate_is_all_or_nothing():
    adv = TargetValueAttack(budget=1.4, vulnerable_arms=frozenset({0}), target=0.0)
    assert adv.corrupt(1, X, 0, 0.6) == -0.6
    assert adv.corrupt(2, X, 0, 0.6) == -0.6
    # 0.2 left; a 0.6 corruption does not fit and is dropped, not clipped.
    assert adv.corrupt(3, X, 0, 0.6) == 0.0
    assert adv.spent == pytest.approx(1.2)
    # A smaller corruption can still fit later.
    assert adv.corrupt(4, X, 0, 0.1) == -0.1
    assert adv.spent == pytest.approx(1.3)


def test_budget_never_exceeded_under_random_stream():
    rng = np.random.default_rng(17)
    adv = TargetValueAttack(budget=10.0, vulnerable_arms=frozenset({0, 1}), target=-1.0)
    for t in range(1, 2000):
        adv.corrupt(t, X, int(rng.integers(0, 4)), float(rng.normal()))
    assert adv.spent <= adv.budget + 1e-12


def test_mask_attack_window_and_magnitude():
    adv = MaskArmAttack(budget=1e9, arm=2, until=100, magnitude=10.0)
    assert adv.corrupt(1, X, 2, 3.0) == -10.0
    assert adv.corrupt(100, X, 2, -3.0) == -10.0
    assert adv.corrupt(101, X, 2, 3.0) == 0.0  # window closed
    assert adv.corrupt(50, X, 1, 3.0) == 0.0  # other arm untouched


def test_region_suppress_is_smooth_and_localized():
    region = (0.44, 0.56)

    def weight(v: float) -> float:
        return OverlapEnv.suppression_weight(v, region)

    adv = RegionSuppressAttack(budget=1e9, arm=0, until=500, depth=1.5, weight=weight)
    assert adv.corrupt(1, np.array([0.50]), 0, 0.6) == -1.5
    assert adv.corrupt(2, np.array([0.30]), 0, 0.6) == 0.0  # outside region
    assert adv.corrupt(3, np.array([0.50]), 1, 0.6) == 0.0  # other arm
    assert adv.corrupt(501, np.array([0.50]), 0, 0.6) == 0.0  # window closed
    partial = adv.corrupt(4, np.array([0.45]), 0, 0.6)
    assert -1.5 < partial < 0.0  # feathered edge


def test_adversary_rejects_bad_parameters():
    with pytest.raises(ValueError):
        TargetValueAttack(budget=-1.0, vulnerable_arms=frozenset({0}), target=0.0)
    with pytest.raises(ValueError):
        MaskArmAttack(budget=1.0, arm=0, until=10, magnitude=0.0)
    with pytest.raises(ValueError):
        RegionSuppressAttack(budget=1.0, arm=0, until=10, depth=0.0, weight=lambda v: 0.0)
