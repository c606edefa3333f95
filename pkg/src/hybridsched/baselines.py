"""Comparison schedulers: truncated BvN decomposition and a Solstice-style heuristic.

Both operate on a *stuffed* copy of the demand, padded with dummy traffic so
that every row and column sums to the same value. The padding is never
counted as delivered throughput.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Matching, Schedule, ScheduleEntry, SchedulerConfig, distinct_nonzero, validate_demand
from .exceptions import InfeasibleDemand, NotDoublyBalanced
from .matching import perfect_matching_on_support
from .validation import check_demand


@dataclass(frozen=True)
class StuffedMatrix:
    base: np.ndarray
    stuffing: np.ndarray
    total: int

    @property
    def matrix(self) -> np.ndarray:
        return self.base + self.stuffing


def stuff(T, window: int | None = None) -> StuffedMatrix:
    """Pad ``T`` so all row and column sums equal the largest line sum.

    Deficits are filled greedily, first on cells already carrying demand so
    the support stays as sparse as possible, then on empty cells.
    """
    T = check_demand(T)
    rows, cols = T.sum(axis=1), T.sum(axis=0)
    S = int(max(rows.max(), cols.max()))
    if window is not None and S > window:
        raise InfeasibleDemand(f"largest line sum {S} exceeds window {window}")
    row_def, col_def = S - rows, S - cols
    stuffing = np.zeros_like(T)
    n = T.shape[0]
    nz = np.argwhere(T > 0)
    for cells in (nz, np.argwhere(np.ones((n, n), dtype=bool))):
        for i, j in cells:
            add = min(row_def[i], col_def[j])
            if add > 0:
                stuffing[i, j] += add
                row_def[i] -= add
                col_def[j] -= add
    return StuffedMatrix(T, stuffing, S)


def _line_sum(M: np.ndarray) -> int:
    rows, cols = M.sum(axis=1), M.sum(axis=0)
    if not (np.all(rows == rows[0]) and np.all(cols == rows[0])):
        raise NotDoublyBalanced("row and column sums differ")
    return int(rows[0])


def bvn_decompose(M) -> list[tuple[int, Matching]]:
    """Integer Birkhoff-von Neumann decomposition of a balanced matrix.

    Repeatedly peels a perfect matching off the positive support, weighted by
    its smallest entry. The weighted matchings sum back to ``M`` exactly.
    """
    R = check_demand(M.matrix if isinstance(M, StuffedMatrix) else M, copy=True)
    _line_sum(R)
    terms = []
    rows = np.arange(R.shape[0])
    while R.any():
        perm = perfect_matching_on_support(R > 0)
        if perm is None:  # pragma: no cover - excluded by balance
            raise NotDoublyBalanced("positive support has no perfect matching")
        weight = int(R[rows, perm].min())
        R[rows, perm] -= weight
        terms.append((weight, Matching.from_permutation(perm)))
    return terms


def _truncate(terms, cfg: SchedulerConfig) -> Schedule:
    entries, used = [], 0
    for weight, m in terms:
        if used + weight + cfg.delay > cfg.window:
            break
        entries.append(ScheduleEntry(weight, m))
        used += weight + cfg.delay
    return Schedule(tuple(entries), window=cfg.window, delay=cfg.delay)


def bvn_schedule(T, cfg: SchedulerConfig) -> Schedule:
    """BvN terms, heaviest first, truncated to the longest prefix that fits."""
    T = check_demand(T)
    validate_demand(T, cfg)
    terms = bvn_decompose(stuff(T, cfg.window))
    terms.sort(key=lambda t: (-t[0], t[1].pairs))
    return _truncate(terms, cfg)


def solstice_schedule(T, cfg: SchedulerConfig) -> Schedule:
    """Repeatedly schedule the longest fully-utilized perfect matching.

    Each round binary-searches the distinct remaining entries for the largest
    ``alpha`` whose support ``{R >= alpha}`` still has a perfect matching.
    The first configuration that does not fit the window ends the schedule.
    """
    T = check_demand(T)
    validate_demand(T, cfg)
    R = stuff(T, cfg.window).matrix
    rows = np.arange(R.shape[0])
    entries, used = [], 0
    while R.any():
        H = distinct_nonzero(R)
        lo, hi = 0, len(H) - 1  # feasible at H[lo]: R stays balanced
        perm = perfect_matching_on_support(R >= H[lo])
        while lo < hi:
            mid = (lo + hi + 1) // 2
            cand = perfect_matching_on_support(R >= H[mid])
            if cand is None:
                hi = mid - 1
            else:
                lo, perm = mid, cand
        alpha = int(H[lo])
        if used + alpha + cfg.delay > cfg.window:
            break
        entries.append(ScheduleEntry(alpha, Matching.from_permutation(perm)))
        used += alpha + cfg.delay
        R[rows, perm] -= alpha
    return Schedule(tuple(entries), window=cfg.window, delay=cfg.delay)
