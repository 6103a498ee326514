"""Least squares and local polynomial fits against independent oracles."""

import numpy as np
import pytest

from fairband.estimators import (
    InsufficientSupportError,
    local_poly_estimate,
    monomial_count,
    monomial_exponents,
    ols_fit,
    ols_predict,
    poly_degree,
)

from oracles import enumerate_monomials, eval_polynomial, normal_equation_ols


def test_ols_matches_normal_equations():
    rng = np.random.default_rng(10)
    for _ in range(200):
        n_feat = int(rng.integers(1, 8))
        n_obs = n_feat + int(rng.integers(3, 30))
        Z = rng.normal(size=(n_obs, n_feat))
        y = rng.normal(size=n_obs)
        np.testing.assert_allclose(ols_fit(Z, y), normal_equation_ols(Z, y), atol=1e-8)


def test_ols_rank_deficient_returns_minimum_norm():
    rng = np.random.default_rng(11)
    base = rng.normal(size=(20, 3))
    Z = np.hstack([base, base[:, :1]])  # duplicated column, rank 3
    y = rng.normal(size=20)
    beta = ols_fit(Z, y)
    assert np.all(np.isfinite(beta))
    # Minimum-norm solution is the pseudoinverse solution.
    np.testing.assert_allclose(beta, np.linalg.pinv(Z) @ y, atol=1e-8)


def test_ols_empty_design_gives_zero():
    beta = ols_fit(np.empty((0, 4)), np.empty(0))
    np.testing.assert_array_equal(beta, np.zeros(4))


def test_ols_shape_mismatch():
    with pytest.raises(ValueError):
        ols_fit(np.zeros((5, 2)), np.zeros(4))


def test_predict_is_dot_product():
    assert ols_predict(np.array([1.0, 2.0]), np.array([3.0, 4.0])) == 11.0


def test_poly_degree_strictly_below_smoothness():
    assert poly_degree(5.0) == 4
    assert poly_degree(4.5) == 4
    assert poly_degree(2.3) == 2
    assert poly_degree(1.0) == 0
    with pytest.raises(ValueError):
        poly_degree(0.0)


def test_monomial_count_binomial():
    assert monomial_count(4, 2) == 15
    assert monomial_count(4, 1) == 5
    assert monomial_count(4, 3) == 35
    assert monomial_count(0, 7) == 1


def test_monomial_exponents_match_enumeration_oracle():
    for degree in range(5):
        for dim in range(1, 4):
            got = [tuple(int(v) for v in row) for row in monomial_exponents(degree, dim)]
            assert got == enumerate_monomials(degree, dim)
            assert len(got) == monomial_count(degree, dim)
            assert got[0] == (0,) * dim  # constant term first


def test_local_fit_recovers_polynomial_exactly():
    # Data generated by a degree-l polynomial is fit without error.
    rng = np.random.default_rng(12)
    for _ in range(30):
        dim = int(rng.integers(1, 4))
        degree = int(rng.integers(0, 5 - dim)) if dim < 3 else int(rng.integers(0, 2))
        exps = enumerate_monomials(degree, dim)
        coefs = rng.normal(size=len(exps))
        x0 = rng.uniform(-0.5, 0.5, dim)
        X = x0 + rng.uniform(-1.0, 1.0, size=(len(exps) * 3 + 10, dim))
        y = eval_polynomial(coefs, exps, X - x0)
        fit = local_poly_estimate(x0, X, y, bandwidth=2.0 * np.sqrt(dim), degree=degree)
        assert fit.value == pytest.approx(coefs[0], abs=1e-7)
        assert fit.support_count == X.shape[0]


def test_local_fit_value_is_windowed_least_squares_intercept():
    rng = np.random.default_rng(13)
    x0 = np.array([0.2, -0.1])
    X = rng.uniform(-1.0, 1.0, size=(120, 2))
    y = rng.normal(size=120)
    h = 0.6
    fit = local_poly_estimate(x0, X, y, bandwidth=h, degree=2)
    inside = np.linalg.norm(X - x0, axis=1) <= h
    exps = enumerate_monomials(2, 2)
    design = np.array(
        [[np.prod((row - x0) ** np.array(e)) for e in exps] for row in X[inside]]
    )
    beta = normal_equation_ols(design, y[inside])
    assert fit.value == pytest.approx(beta[0], abs=1e-8)
    assert fit.support_count == int(inside.sum())


def test_local_fit_ball_boundary_counts():
    # A sample at exactly the bandwidth distance is inside the closed ball.
    x0 = np.zeros(2)
    X = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -0.5], [0.5, 0.5], [0.2, 0.1], [0.3, -0.3]])
    y = np.ones(7)
    fit = local_poly_estimate(x0, X, y, bandwidth=1.0, degree=1)
    assert fit.support_count == 7
    assert fit.value == pytest.approx(1.0, abs=1e-9)


def test_local_fit_ignores_samples_outside_ball():
    rng = np.random.default_rng(14)
    x0 = np.zeros(1)
    X_in = rng.uniform(-0.5, 0.5, size=(40, 1))
    y_in = rng.normal(size=40)
    X_far = rng.uniform(5.0, 6.0, size=(25, 1))
    y_far = rng.normal(size=25) * 1e6
    fit_clean = local_poly_estimate(x0, X_in, y_in, bandwidth=0.6, degree=2)
    fit_noisy = local_poly_estimate(
        x0, np.vstack([X_in, X_far]), np.concatenate([y_in, y_far]), bandwidth=0.6, degree=2
    )
    assert fit_noisy.value == fit_clean.value
    assert fit_noisy.support_count == fit_clean.support_count


def test_local_fit_insufficient_support_raises_with_count():
    rng = np.random.default_rng(15)
    X = rng.uniform(-0.1, 0.1, size=(14, 2))  # degree 4 in 2-d needs 15
    y = rng.normal(size=14)
    with pytest.raises(InsufficientSupportError) as exc:
        local_poly_estimate(np.zeros(2), X, y, bandwidth=1.0, degree=4)
    assert exc.value.support_count == 14


def test_local_fit_rejects_bad_bandwidth():
    with pytest.raises(ValueError):
        local_poly_estimate(np.zeros(1), np.zeros((3, 1)), np.zeros(3), bandwidth=0.0, degree=0)
