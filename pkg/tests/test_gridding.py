"""Lattice geometry and epoch schedules, with frozen scalar values."""

import math

import numpy as np
import pytest

from fairband.gridding import (
    EpochPlan,
    GridLattice,
    bandwidth_for,
    build_epoch_plan,
    error_tolerance,
    grid_spacing,
    make_lattice,
)


def test_grid_spacing_frozen_value():
    assert grid_spacing(5000, 5.0, 2) == pytest.approx(3.376494137011386e-3, rel=1e-12)


def test_grid_spacing_high_smoothness_limit():
    # As smoothness grows the exponent tends to -1/2.
    want = 10000**-0.5 / math.log(10000)
    assert grid_spacing(10000, 1e6, 2) == pytest.approx(want, rel=1e-4)


def test_lattice_cell_count():
    lat = make_lattice(5000, 5.0, np.zeros(2), np.ones(2))
    assert lat.cells_per_dim == 297
    assert lat.n_cells == 297**2


def _unit_lattice(spacing: float, dim: int) -> GridLattice:
    return GridLattice(
        dim=dim,
        spacing=spacing,
        lo=np.zeros(dim),
        hi=np.ones(dim),
        cells_per_dim=math.ceil(1.0 / spacing),
    )


def test_cell_boundary_ties_toward_origin():
    lat = _unit_lattice(0.25, 1)
    assert lat.cell_coords(np.array([0.0])) == (0,)
    # 0.25 is equidistant between the centers of cells 0 and 1.
    assert lat.cell_coords(np.array([0.25])) == (0,)
    assert lat.cell_coords(np.array([0.2501])) == (1,)
    assert lat.cell_coords(np.array([0.26])) == (1,)
    assert lat.cell_coords(np.array([1.0])) == (3,)


def test_cell_index_row_major():
    lat = _unit_lattice(0.5, 2)
    assert lat.cell_index(np.array([0.3, 0.8])) == 1  # coords (0, 1)
    assert lat.cell_index(np.array([0.8, 0.3])) == 2  # coords (1, 0)
    assert lat.cell_index(np.array([0.8, 0.8])) == 3


def test_cell_center_is_nearest_grid_point():
    rng = np.random.default_rng(20)
    lat = make_lattice(2000, 2.0, np.zeros(2), np.ones(2))
    for _ in range(300):
        x = rng.uniform(0.0, 1.0, 2)
        center = lat.center_unit(lat.cell_coords(x))
        assert np.all(np.abs(x - center) <= lat.spacing / 2 + 1e-12)


def test_lattice_rejects_context_outside_box():
    lat = _unit_lattice(0.25, 1)
    with pytest.raises(ValueError):
        lat.cell_coords(np.array([1.2]))


def test_lattice_maps_general_boxes():
    lat = make_lattice(5000, 5.0, np.array([-1.0, -1.0]), np.array([1.0, 1.0]))
    u = lat.to_unit(np.array([0.0, -1.0]))
    np.testing.assert_allclose(u, [0.5, 0.0])


def test_bandwidth_frozen_value():
    assert bandwidth_for(165, 5.0, 2) == pytest.approx(0.6534459510930491, rel=1e-12)


def test_bandwidth_shrinks_with_samples():
    assert bandwidth_for(1000, 5.0, 2) < bandwidth_for(100, 5.0, 2)


def test_tolerance_frozen_value_and_exact_halving():
    assert error_tolerance(1, 5000, 5.0, 5.0, 2) == pytest.approx(
        0.10028769061054219, rel=1e-12
    )
    for q in range(1, 8):
        e1 = error_tolerance(q, 5000, 5.0, 5.0, 2)
        e2 = error_tolerance(q + 1, 5000, 5.0, 5.0, 2)
        assert e2 / e1 == 0.5  # exact binary halving


def test_robust_tolerance_zero_budget_is_floored_clean_value():
    for q in range(1, 6):
        plain = error_tolerance(q, 10000, 5.0, 5.0, 2)
        robust = error_tolerance(q, 10000, 5.0, 5.0, 2, robust=True, corruption_budget=0.0)
        assert robust == max(plain, 10000 ** (-5.0 / 12.0))


def test_robust_tolerance_frozen_values():
    # Additive slack alone: c2 * budget * len**(-2*beta/(2*beta+dim)).
    slack = 0.3 * 200.0 * 661 ** (-10.0 / 12.0)
    assert slack == pytest.approx(0.2679065720544411, rel=1e-12)
    got = error_tolerance(
        1, 10000, 5.0, 5.0, 2, robust=True, corruption_budget=200.0, epoch_len=2729
    )
    assert got == pytest.approx(0.10373358805343236, rel=1e-10)


def test_robust_tolerance_needs_epoch_len_with_budget():
    with pytest.raises(ValueError):
        error_tolerance(1, 10000, 5.0, 5.0, 2, robust=True, corruption_budget=10.0)


def test_epoch_plan_frozen_lengths_synthetic():
    plan = build_epoch_plan(5000, 5.0, 5.0, 2, c0=0.2)
    assert plan.lengths == (661, 3451, 888)
    plan = build_epoch_plan(10000, 5.0, 5.0, 2, c0=0.2)
    assert plan.lengths == (834, 4363, 4803)


def test_epoch_plan_frozen_lengths_robust():
    plan = build_epoch_plan(
        10000, 5.0, 5.0, 2, c0=0.2, robust=True, corruption_budget=200.0, c1=0.03
    )
    assert plan.lengths == (2729, 4363, 2908)


def test_epoch_plan_frozen_lengths_one_dim():
    plan = build_epoch_plan(20000, 5.0, 5.0, 1, c0=0.2)
    assert plan.lengths == (514, 2322, 10633, 6531)


def test_epoch_plan_frozen_lengths_three_dim():
    plan = build_epoch_plan(5000, 5.0, 5.0, 3, c0=0.15)
    assert plan.lengths == (969, 4031)


def test_epoch_plan_covers_horizon_exactly():
    for T in (100, 777, 5000, 12345):
        plan = build_epoch_plan(T, 5.0, 5.0, 2, c0=0.2)
        assert sum(plan.lengths) == T
        assert plan.boundaries[-1] == T


def test_epoch_lookup():
    plan = build_epoch_plan(5000, 5.0, 5.0, 2, c0=0.2)
    assert plan.epoch_of(1) == 1
    assert plan.epoch_of(661) == 1
    assert plan.epoch_of(662) == 2
    assert plan.epoch_of(5000) == 3
    assert plan.is_epoch_end(661)
    assert not plan.is_epoch_end(662)
    with pytest.raises(ValueError):
        plan.epoch_of(0)
    with pytest.raises(ValueError):
        plan.epoch_of(5001)


def test_huge_budget_degenerates_to_pure_exploration():
    plan = build_epoch_plan(
        500, 5.0, 5.0, 2, c0=0.2, robust=True, corruption_budget=1e6, c1=0.03
    )
    assert plan.lengths == (500,)


def test_epoch_plan_tolerances_match_direct_evaluation():
    plan = build_epoch_plan(
        10000, 5.0, 5.0, 2, c0=0.2, robust=True, corruption_budget=200.0, c1=0.03, c2=0.3
    )
    for q in range(1, plan.n_epochs + 1):
        want = error_tolerance(
            q, 10000, 5.0, 5.0, 2,
            robust=True, corruption_budget=200.0, epoch_len=plan.lengths[q - 1], c2=0.3,
        )
        assert plan.tolerances[q - 1] == want


def test_theoretical_mode_needs_constants():
    with pytest.raises(ValueError):
        build_epoch_plan(5000, 5.0, 5.0, 2, c0=0.2, mode="theoretical")
    plan = build_epoch_plan(
        5000, 5.0, 5.0, 2, c0=0.2, mode="theoretical",
        n_arms=4, concentration=50.0, min_density=0.2,
    )
    assert sum(plan.lengths) == 5000
    assert all(n >= 1 for n in plan.lengths)


def test_epoch_plan_validates_shape():
    with pytest.raises(ValueError):
        EpochPlan(horizon=10, lengths=(5, 4), tolerances=(0.1, 0.1))
    with pytest.raises(ValueError):
        EpochPlan(horizon=10, lengths=(5, 5), tolerances=(0.1,))
