"""Maximum-weight bipartite matching and the thresholded matching curve."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .core import Matching, distinct_nonzero, threshold
from .validation import check_demand, check_nonnegative_int


@dataclass(frozen=True)
class MwmCurvePoint:
    alpha: int
    value: int
    effective_utilization: Fraction


def _solve(w: np.ndarray) -> tuple[int, np.ndarray]:
    """Optimal value and row->column assignment (``-1`` = unmatched) of a weight block."""
    rows, cols = linear_sum_assignment(w, maximize=True)
    assign = np.full(w.shape[0], -1, dtype=np.int64)
    picked = w[rows, cols] > 0
    assign[rows[picked]] = cols[picked]
    return int(w[rows, cols].sum()), assign


def mwm_value(weights) -> int:
    """Value of a maximum-weight matching, without canonicalizing the matching."""
    w = np.asarray(weights)
    if not w.any():
        return 0
    rows, cols = linear_sum_assignment(w, maximize=True)
    return int(w[rows, cols].sum())


def max_weight_matching(weights) -> tuple[Matching, int]:
    """Maximum-weight matching of a bipartite graph given by an ``n x n`` weight matrix.

    Zero-weight edges count as absent and are never returned. Among all
    optimal matchings the lexicographically smallest sorted pair list wins;
    this is found by fixing rows one at a time to their smallest column that
    still admits an optimal completion.
    """
    w = check_demand(weights)
    active_rows = np.flatnonzero(w.any(axis=1))
    active_cols = np.flatnonzero(w.any(axis=0))
    if active_rows.size == 0:
        return Matching(()), 0
    sub = w[np.ix_(active_rows, active_cols)]
    total, assign = _solve(sub)

    pairs: list[tuple[int, int]] = []
    free_cols = np.arange(sub.shape[1])
    remaining = total
    current = assign  # assignment for rows r..end, in current free-column indices
    for r in range(sub.shape[0]):
        rest = sub[r + 1 :][:, free_cols]
        row = sub[r, free_cols]
        cur = current[0]
        # candidate positions sorted by absolute column, strictly before the current choice
        limit = free_cols[cur] if cur >= 0 else np.inf
        cands = [c for c in np.flatnonzero(row > 0) if free_cols[c] < limit]
        chosen, chosen_rest = cur, current[1:]
        for c in cands:
            keep = np.delete(np.arange(free_cols.size), c)
            val, a = _solve(rest[:, keep]) if rest.shape[0] else (0, np.empty(0, np.int64))
            if val + int(row[c]) == remaining:
                chosen = c
                chosen_rest = np.where(a >= 0, keep[np.maximum(a, 0)], -1)
                break
        if chosen >= 0:
            remaining -= int(row[chosen])
            pairs.append((int(active_rows[r]), int(active_cols[free_cols[chosen]])))
            # reindex the remaining assignment after deleting the chosen column
            chosen_rest = np.where(
                chosen_rest > chosen, chosen_rest - 1, chosen_rest
            )
            free_cols = np.delete(free_cols, chosen)
        current = chosen_rest
    return Matching(tuple(pairs)), total


def mwm_curve(T, delta: int) -> list[MwmCurvePoint]:
    """Max-weight-matching value of ``min(T, alpha)`` at each distinct nonzero entry."""
    T = check_demand(T)
    delta = check_nonnegative_int(delta, "delta")
    points = []
    for alpha in distinct_nonzero(T):
        alpha = int(alpha)
        value = mwm_value(np.minimum(T, alpha))
        points.append(MwmCurvePoint(alpha, value, Fraction(value, alpha + delta)))
    return points


def perfect_matching_on_support(mask) -> np.ndarray | None:
    """Column assigned to each row in some perfect matching of ``mask``, or None."""
    mask = np.asarray(mask, dtype=bool)
    n = mask.shape[0]
    if not mask.any(axis=1).all() or not mask.any(axis=0).all():
        return None
    match = maximum_bipartite_matching(csr_matrix(mask.astype(np.int8)), perm_type="column")
    if np.any(match < 0):
        return None
    return match.astype(np.int64)


def has_perfect_matching_at_threshold(T, alpha: int) -> bool:
    """True iff the edges ``{(i, j): T(i, j) >= alpha}`` admit a perfect matching."""
    T = check_demand(T)
    alpha = check_nonnegative_int(alpha, "alpha", minimum=1)
    return perfect_matching_on_support(T >= alpha) is not None


__all__ = [
    "MwmCurvePoint",
    "has_perfect_matching_at_threshold",
    "max_weight_matching",
    "mwm_curve",
    "mwm_value",
    "perfect_matching_on_support",
    "threshold",
]
