"""Tolerance chaining over scalar estimates.

Two estimates are linked when they differ by at most a tolerance eps.  The
chain relation is the transitive closure of that link: values connected
through intermediaries count as indistinguishable even when their direct gap
exceeds eps.  Selection keeps every arm chained to the current best, which is
what prevents an arm from being dropped on the strength of a difference the
data cannot support.

Boundary comparisons absorb relative float error: a pair whose gap exceeds
the tolerance by a few ulps still counts as linked, so decimal-exact
boundaries like |1.1 - 0.5| <= 0.6 behave as written.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

__all__ = ["eps_linked", "chain_component_of_max", "candidate_set"]

# Relative slack on the link boundary, scaled by the largest magnitude in play.
REL_SLACK = 1e-12


def eps_linked(u: float, v: float, eps: float) -> bool:
    """Direct link test, boundary inclusive: |u - v| <= eps."""
    if eps < 0:
        raise ValueError(f"tolerance must be nonnegative, got {eps!r}")
    slack = REL_SLACK * max(1.0, abs(u), abs(v))
    return abs(u - v) <= eps + slack


def chain_component_of_max(values: Sequence[float], eps: float) -> set[int]:
    """Indices chained to the maximum of ``values`` under tolerance ``eps``.

    On the real line the chain component containing the max is an interval:
    sort descending and cut at the first adjacent gap exceeding eps.  That
    gives the closure in O(n log n) without building the link graph.
    """
    if eps < 0:
        raise ValueError(f"tolerance must be nonnegative, got {eps!r}")
    vals = np.asarray(values, dtype=float)
    if vals.ndim != 1 or vals.size == 0:
        raise ValueError("values must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(vals)):
        raise ValueError("values must be finite")
    slack = REL_SLACK * max(1.0, float(np.abs(vals).max()))
    order = np.argsort(-vals, kind="stable")
    keep = [int(order[0])]
    for a, b in zip(order, order[1:]):
        if vals[a] - vals[b] > eps + slack:
            break
        keep.append(int(b))
    return set(keep)


def candidate_set(values: Sequence[float], subset: Sequence[int], eps: float) -> set[int]:
    """Chain component of the max restricted to ``subset``.

    The max and the chaining both live inside the subset; an excluded arm
    cannot bridge two kept arms.  Returned indices refer to the original
    ``values`` positions.
    """
    idx = list(subset)
    if len(idx) == 0:
        raise ValueError("subset must be nonempty")
    if len(set(idx)) != len(idx):
        raise ValueError("subset contains duplicate indices")
    vals = np.asarray(values, dtype=float)
    sub = vals[idx]
    local = chain_component_of_max(sub, eps)
    return {idx[i] for i in local}
