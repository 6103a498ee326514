"""Environment reward surfaces, context sampling and the wine pipeline."""

import math

import numpy as np
import pytest

from fairband.environments import (
    LinearEnv,
    OverlapEnv,
    SmoothEnv,
    WineEnv,
    embed_components,
    load_wine,
    wine_reward_curves,
)


# -- linear -----------------------------------------------------------------


def test_linear_weight_pattern():
    env = LinearEnv(10, 10)
    W = env.weights
    assert W[0, 0] == 2.0 and W[0, 1] == 1.0 and W[0, 9] == -1.0
    assert W[3, 3] == 2.0 and W[3, 4] == 1.0 and W[3, 2] == -1.0
    assert np.count_nonzero(W[3]) == 3


def test_linear_weight_collision_sums():
    # With 2 dimensions the +1 and -1 neighbors land on the same index.
    env = LinearEnv(2, 2)
    np.testing.assert_array_equal(env.weights, [[2.0, 0.0], [0.0, 2.0]])
    assert env.intercepts[0] == 0.0


def test_linear_means_are_affine():
    env = LinearEnv(10, 10)
    x = np.ones(10)
    want = env.weights.sum(axis=1) + env.intercepts
    np.testing.assert_allclose(env.true_means(x), want)
    # Sanity: every arm's weight row sums to 2, so means are 2 + intercept.
    np.testing.assert_allclose(env.true_means(x), 2.0 + env.intercepts)


def test_linear_context_bounds_and_reproducibility():
    env = LinearEnv(5, 3)
    rng = np.random.default_rng(42)
    xs = np.array([env.sample_context(rng) for _ in range(200)])
    assert np.all(xs >= -1.0) and np.all(xs <= 1.0)
    rng2 = np.random.default_rng(42)
    np.testing.assert_array_equal(xs[0], env.sample_context(rng2))


def test_linear_reward_bound_dominates():
    env = LinearEnv(10, 10)
    rng = np.random.default_rng(7)
    for _ in range(500):
        means = env.true_means(env.sample_context(rng))
        assert np.all(np.abs(means) <= env.reward_bound + 1e-12)


# -- smooth -----------------------------------------------------------------


def test_smooth_center_values():
    env = SmoothEnv()
    np.testing.assert_allclose(env.true_means(np.zeros(2)), math.exp(-0.5))
    means = env.true_means(np.array([0.5, 0.5]))
    assert means[0] == pytest.approx(1.0)
    assert means[1] == pytest.approx(math.exp(-1.0))
    assert means[2] == pytest.approx(math.exp(-2.0))
    assert means[3] == pytest.approx(math.exp(-1.0))


def test_smooth_bounds():
    env = SmoothEnv()
    rng = np.random.default_rng(8)
    for _ in range(300):
        means = env.true_means(env.sample_context(rng))
        assert np.all(means > 0.0) and np.all(means <= 1.0)


# -- overlap ----------------------------------------------------------------


def test_overlap_endpoints_exact():
    env = OverlapEnv()
    assert env.true_means(np.array([0.0]))[0] == 1.0
    assert env.true_means(np.array([0.0]))[1] == 0.2
    assert env.true_means(np.array([1.0]))[1] == 1.0
    assert env.true_means(np.array([1.0]))[0] == 0.2


def test_overlap_plateau_is_bitwise_tie():
    env = OverlapEnv()
    xs = np.linspace(*OverlapEnv.PLATEAU, 2001)
    f0, f1 = env.curve(xs, 0), env.curve(xs, 1)
    assert np.all(f0 == f1)
    np.testing.assert_allclose(f0, 0.6, atol=1e-12)


def test_overlap_tie_and_dominance_measures():
    # 10^4-point sweep: fat exact-tie set, each arm strictly better on its side.
    env = OverlapEnv()
    xs = np.linspace(0.0, 1.0, 10_000)
    f0, f1 = env.curve(xs, 0), env.curve(xs, 1)
    assert np.mean(f0 == f1) >= 0.1
    assert np.mean(f0 > f1) >= 0.05
    assert np.mean(f1 > f0) >= 0.05
    left = xs < 0.27
    right = xs > 0.73
    assert np.all(f0[left] > f1[left])
    assert np.all(f1[right] > f0[right])


def test_overlap_mirror_symmetry():
    env = OverlapEnv()
    xs = np.linspace(0.0, 1.0, 4001)
    np.testing.assert_array_equal(env.curve(xs, 0), env.curve(1.0 - xs, 1))


def test_overlap_curves_are_continuous():
    env = OverlapEnv()
    xs = np.linspace(0.0, 1.0, 100_001)
    diffs = np.abs(np.diff(env.curve(xs, 1)))
    assert diffs.max() < 3e-4  # slope stays modest, no jumps


def test_overlap_suppression_weight_shape():
    w = OverlapEnv.suppression_weight
    region = (0.44, 0.56)
    assert w(0.50, region) == 1.0
    assert w(0.46, region) == 1.0
    assert w(0.54, region) == 1.0
    assert w(0.44, region) == 0.0
    assert w(0.56, region) == 0.0
    assert w(0.30, region) == 0.0
    assert 0.0 < w(0.45, region) < 1.0


# -- wine -------------------------------------------------------------------


def test_wine_loader_standardizes(wine_paths):
    records = load_wine(*wine_paths)
    assert records.features.shape == (140, 11)
    assert records.n_red == 60 and records.n_white == 80
    np.testing.assert_allclose(records.features.mean(axis=0), 0.0, atol=1e-9)
    np.testing.assert_allclose(records.features.std(axis=0), 1.0, atol=1e-9)
    assert records.quality.dtype == np.int64


def test_wine_loader_rejects_malformed(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("not;the;right;header\n1;2;3;4\n")
    with pytest.raises(ValueError, match="header"):
        load_wine(bad, bad)


def test_wine_loader_rejects_short_row(tmp_path, wine_paths):
    red, _ = wine_paths
    bad = tmp_path / "short.csv"
    with open(red) as fh:
        header = fh.readline()
    bad.write_text(header + "1;2;3\n")
    with pytest.raises(ValueError, match="fields"):
        load_wine(bad, bad)


def test_wine_loader_rejects_empty(tmp_path, wine_paths):
    red, _ = wine_paths
    empty = tmp_path / "empty.csv"
    with open(red) as fh:
        empty.write_text(fh.readline())
    with pytest.raises(ValueError, match="no data rows"):
        load_wine(red, empty)


def test_wine_reward_curve_values():
    got = wine_reward_curves(np.array([8]))[0]
    assert got[0] == pytest.approx(1.7615941559557646, rel=1e-12)
    assert got[2] == pytest.approx(0.2384058440442351, rel=1e-12)
    assert got[1] == pytest.approx(got[0] * got[2], rel=1e-12)
    mid = wine_reward_curves(np.array([6]))[0]
    np.testing.assert_allclose(mid, [1.0, 1.0, 1.0])


def test_wine_reward_curve_shapes():
    q = np.arange(0, 11)
    curves = wine_reward_curves(q)
    assert np.all(curves >= 0.0) and np.all(curves <= 2.0)
    assert np.all(np.diff(curves[:, 0]) > 0)  # quality seeker increases
    assert np.all(np.diff(curves[:, 2]) < 0)  # economy agent decreases
    assert np.argmax(curves[:, 1]) == 6  # middle agent peaks at the midpoint


def test_embedding_components_orthonormal_and_ordered():
    rng = np.random.default_rng(30)
    base = rng.normal(size=(500, 3)) * np.array([5.0, 2.0, 0.5])
    mix = rng.normal(size=(3, 11))
    Z = base @ mix + 0.01 * rng.normal(size=(500, 11))
    Z = (Z - Z.mean(axis=0)) / Z.std(axis=0)
    comps = embed_components(Z, 3)
    np.testing.assert_allclose(comps @ comps.T, np.eye(3), atol=1e-9)
    proj = Z @ comps.T
    variances = proj.var(axis=0)
    assert variances[0] >= variances[1] >= variances[2]
    for row in comps:
        assert row[np.argmax(np.abs(row))] > 0  # deterministic sign convention


def test_wine_env_views(wine_paths):
    records = load_wine(*wine_paths)
    lin = WineEnv(records, "linear")
    smo = WineEnv(records, "smooth")
    assert lin.dim == 11 and smo.dim == 3
    assert lin.n_arms == smo.n_arms == 3
    assert lin.noise_sd == 0.0 and smo.noise_sd == 0.0
    assert np.all(smo.contexts >= 0.0) and np.all(smo.contexts <= 1.0)
    assert smo.contexts.min(axis=0) == pytest.approx(np.zeros(3), abs=1e-12)
    assert smo.contexts.max(axis=0) == pytest.approx(np.ones(3), abs=1e-12)
    np.testing.assert_array_equal(lin.means, smo.means)


def test_wine_env_cycles_seeded_permutation(wine_paths):
    records = load_wine(*wine_paths)
    env = WineEnv(records, "linear")
    n = records.features.shape[0]
    sampler = env.start(np.random.default_rng(5))
    seen = [sampler.next(t) for t in range(1, n + 1)]
    # First pass visits every record exactly once.
    idx = [int(np.argmin(np.abs(records.features - x).sum(axis=1))) for x, _ in seen]
    assert sorted(idx) == list(range(n))
    # The cycle repeats afterwards.
    x_again, means_again = sampler.next(n + 1)
    np.testing.assert_array_equal(x_again, seen[0][0])
    np.testing.assert_array_equal(means_again, seen[0][1])
    # Same seed, same order; different seed, different order.
    s2 = env.start(np.random.default_rng(5))
    np.testing.assert_array_equal(s2.next(1)[0], seen[0][0])
    s3 = env.start(np.random.default_rng(6))
    assert not np.array_equal(s3.next(1)[0], seen[0][0])


def test_wine_env_rejects_direct_sampling(wine_paths):
    records = load_wine(*wine_paths)
    env = WineEnv(records, "linear")
    with pytest.raises(RuntimeError):
        env.sample_context(np.random.default_rng(0))
