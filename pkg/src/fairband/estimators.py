"""Regression estimators shared by the policies.

Two families: plain least squares on arbitrary design matrices, used by the
linear policies, and local polynomial regression with an indicator kernel,
used by the nonparametric policies.  Both return minimum-norm solutions when
the design is rank deficient so that early rounds with few samples stay
well defined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "InsufficientSupportError",
    "LocalPolyFit",
    "ols_fit",
    "ols_predict",
    "poly_degree",
    "monomial_exponents",
    "monomial_count",
    "local_poly_estimate",
]

# Singular values below this fraction of the largest are treated as zero.
RANK_TOL = 1e-10


class InsufficientSupportError(ValueError):
    """Raised when a local fit has fewer samples in the ball than coefficients.

    Carries ``support_count`` so callers can report how short the window was.
    """

    def __init__(self, message: str, support_count: int):
        super().__init__(message)
        self.support_count = support_count


def ols_fit(Z: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Minimum-norm least squares coefficients for design Z and responses y."""
    Z = np.asarray(Z, dtype=float)
    y = np.asarray(y, dtype=float)
    if Z.ndim != 2:
        raise ValueError(f"design must be 2-d, got shape {Z.shape}")
    if y.shape != (Z.shape[0],):
        raise ValueError(f"responses have shape {y.shape}, expected ({Z.shape[0]},)")
    if Z.shape[0] == 0:
        return np.zeros(Z.shape[1])
    beta, _, _, _ = np.linalg.lstsq(Z, y, rcond=RANK_TOL)
    return beta


def ols_predict(beta: np.ndarray, z: np.ndarray) -> float:
    return float(np.asarray(z, dtype=float) @ np.asarray(beta, dtype=float))


def poly_degree(smoothness: float) -> int:
    """Largest integer strictly below the smoothness exponent."""
    if smoothness <= 0:
        raise ValueError(f"smoothness must be positive, got {smoothness!r}")
    return math.ceil(smoothness) - 1


@lru_cache(maxsize=None)
def monomial_exponents(degree: int, dim: int) -> np.ndarray:
    """Exponent rows for all monomials of total degree <= degree in dim vars.

    Ordered by total degree, then lexicographically, so row 0 is the constant
    term and the fitted coefficient 0 is the value at the expansion point.
    """
    if degree < 0 or dim < 1:
        raise ValueError(f"need degree >= 0 and dim >= 1, got {degree}, {dim}")
    rows: list[tuple[int, ...]] = []

    def fill(prefix: tuple[int, ...], remaining: int, slots: int) -> None:
        if slots == 1:
            rows.append(prefix + (remaining,))
            return
        for e in range(remaining + 1):
            fill(prefix + (e,), remaining - e, slots - 1)

    for total in range(degree + 1):
        start = len(rows)
        fill((), total, dim)
        rows[start:] = sorted(rows[start:])
    out = np.array(rows, dtype=np.int64)
    out.setflags(write=False)
    return out


def monomial_count(degree: int, dim: int) -> int:
    """Coefficient count of a degree-bounded polynomial: C(degree + dim, dim)."""
    return math.comb(degree + dim, dim)


@dataclass(frozen=True)
class LocalPolyFit:
    """Result of one local polynomial regression."""

    center: np.ndarray
    degree: int
    bandwidth: float
    value: float
    support_count: int


def _design(diffs: np.ndarray, exponents: np.ndarray) -> np.ndarray:
    # (n, 1, dim) ** (1, m, dim) -> product over dim gives the (n, m) design.
    return np.prod(diffs[:, None, :] ** exponents[None, :, :], axis=2)


def local_poly_estimate(
    x0: np.ndarray,
    X: np.ndarray,
    y: np.ndarray,
    bandwidth: float,
    degree: int,
) -> LocalPolyFit:
    """Fit a polynomial to the samples inside the closed ball around x0.

    Indicator kernel: every sample with ||x - x0||_2 <= bandwidth enters with
    equal weight, boundary included.  The estimate is the fitted intercept,
    i.e. the polynomial evaluated at x0.  Raises InsufficientSupportError when
    the ball holds fewer samples than the polynomial has coefficients; callers
    treat that arm as not yet comparable rather than guessing.
    """
    x0 = np.asarray(x0, dtype=float)
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if bandwidth <= 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth!r}")
    if X.ndim != 2 or X.shape[1] != x0.shape[0]:
        raise ValueError(f"samples have shape {X.shape}, expected (n, {x0.shape[0]})")
    if y.shape != (X.shape[0],):
        raise ValueError(f"responses have shape {y.shape}, expected ({X.shape[0]},)")

    diffs = X - x0
    inside = np.einsum("ij,ij->i", diffs, diffs) <= bandwidth * bandwidth
    support = int(np.count_nonzero(inside))
    needed = monomial_count(degree, x0.shape[0])
    if support < needed:
        raise InsufficientSupportError(
            f"local fit at bandwidth {bandwidth:g} has {support} samples in the "
            f"ball but needs at least {needed}",
            support_count=support,
        )
    design = _design(diffs[inside], monomial_exponents(degree, x0.shape[0]))
    coef, _, _, _ = np.linalg.lstsq(design, y[inside], rcond=RANK_TOL)
    return LocalPolyFit(
        center=x0,
        degree=degree,
        bandwidth=float(bandwidth),
        value=float(coef[0]),
        support_count=support,
    )
