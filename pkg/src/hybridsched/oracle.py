"""Exhaustive reference solvers for tiny instances.

These are deliberately naive: they enumerate matchings, schedules or path
packings directly and share no code with the schedulers they check beyond
the data types.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import numpy as np

from .core import Matching, Schedule, ScheduleEntry, SchedulerConfig
from .eclipse import GreedyStepResult
from .exceptions import EmptyDemand, TooLarge
from .indirect import LayeredGraph, Path, PathAssignment
from .validation import check_demand, check_nonnegative_int


@dataclass(frozen=True)
class OracleResult:
    value: int
    witness: Union[Schedule, list]


def all_matchings(support: np.ndarray) -> list[tuple[tuple[int, int], ...]]:
    """Every matching (including the empty one) using only ``True`` cells of ``support``."""
    n = support.shape[0]
    out = []

    def rec(i, used, cur):
        if i == n:
            out.append(tuple(cur))
            return
        rec(i + 1, used, cur)
        for j in range(n):
            if support[i, j] and j not in used:
                rec(i + 1, used | {j}, cur + [(i, j)])

    rec(0, frozenset(), [])
    return out


def brute_force_best_pair(T_rem, delta: int) -> GreedyStepResult:
    """Best ``(alpha, M)`` by effective utilization over all matchings and distinct entries.

    Ties prefer the larger ``alpha``, then the lexicographically smaller matching.
    """
    T = check_demand(T_rem)
    delta = check_nonnegative_int(delta, "delta")
    if T.shape[0] > 4:
        raise TooLarge("brute_force_best_pair supports n <= 4")
    if not T.any():
        raise EmptyDemand("all-zero demand")
    best_key, best = None, None
    for pairs in all_matchings(T > 0):
        vals = [int(T[i, j]) for i, j in pairs]
        for alpha in sorted({int(x) for x in T[T > 0]}):
            gain = sum(min(alpha, v) for v in vals)
            key = (Fraction(gain, alpha + delta), alpha)
            if best_key is None or key > best_key or (key == best_key and pairs < best[0]):
                best_key, best = key, (pairs, gain)
    pairs, gain = best
    return GreedyStepResult(best_key[1], Matching(pairs), gain, best_key[0])


def _compositions(total: int, parts: int) -> np.ndarray:
    """All vectors of ``parts`` positive integers summing to ``total``."""
    rows = []
    for cuts in itertools.combinations(range(1, total), parts - 1):
        edges = (0,) + cuts + (total,)
        rows.append([b - a for a, b in zip(edges, edges[1:])])
    return np.array(rows, dtype=np.int64).reshape(-1, parts)


def brute_force_optimal_direct(T, cfg: SchedulerConfig, k_max: int = 3) -> OracleResult:
    """Optimal direct throughput over all schedules with at most ``k_max`` configurations.

    Full permutations suffice (extra circuits never hurt) and so do schedules
    that spend the whole window (longer durations never hurt), so only
    multisets of permutations and compositions of ``W - k*delta`` are scanned.
    """
    T = check_demand(T)
    n, W, delta = T.shape[0], cfg.window, cfg.delay
    if n > 4 or W > 16 or k_max > 3:
        raise TooLarge("brute_force_optimal_direct supports n <= 4, W <= 16, k_max <= 3")
    perms = list(itertools.permutations(range(n)))
    P = np.zeros((len(perms), n * n), dtype=np.int64)
    for p, perm in enumerate(perms):
        P[p, [i * n + j for i, j in enumerate(perm)]] = 1
    flat_T = T.reshape(-1)
    best_val, best_sched = 0, Schedule((), window=W, delay=delta)
    for k in range(1, k_max + 1):
        budget = W - k * delta
        if budget < k:
            break
        combos = np.array(list(itertools.combinations_with_replacement(range(len(perms)), k)))
        comps = _compositions(budget, k)
        # (compositions, combos, n*n) configuration sums
        total = np.einsum("ak,ckx->acx", comps, P[combos])
        vals = np.minimum(total, flat_T).sum(axis=2)
        a, c = np.unravel_index(int(np.argmax(vals)), vals.shape)
        if vals[a, c] > best_val:
            best_val = int(vals[a, c])
            entries = tuple(
                ScheduleEntry(int(comps[a, i]), Matching.from_permutation(perms[combos[c, i]]))
                for i in range(k)
            )
            best_sched = Schedule(entries, window=W, delay=delta)
    return OracleResult(best_val, best_sched)


def enumerate_paths(g: LayeredGraph) -> list[Path]:
    """Every source-to-sink path with distinct endpoints over positive-capacity edges."""
    paths = []
    for s in range(g.n):
        frontier = [((0, s),)]
        for j in range(g.k):
            nxt = []
            for nodes in frontier:
                u = nodes[-1][1]
                nxt.append(nodes + ((j + 1, u),))
                v = g.dest[j, u]
                if v >= 0 and g.capacity[j, u] > 0:
                    nxt.append(nodes + ((j + 1, int(v)),))
            frontier = nxt
        paths.extend(Path(nodes) for nodes in frontier if nodes[-1][1] != s)
    return paths


def brute_force_indirect(g: LayeredGraph, T=None) -> OracleResult:
    """Maximum integer multi-commodity packing of ``T`` onto paths of ``g``.

    Depth-first over unit flows with memoization on (path index, remaining
    capacities, remaining demands); paths are taken in index order so each
    packing is visited once.
    """
    T = (g.demand if T is None else check_demand(T)).copy()
    np.fill_diagonal(T, 0)
    if g.n > 3 or g.k > 3 or g.capacity.max(initial=0) > 4 or T.sum() > 12:
        raise TooLarge("brute_force_indirect supports n <= 3, k <= 3, capacities <= 4, |T| <= 12")
    paths = [p for p in enumerate_paths(g) if T[p.source, p.destination] > 0]
    edge_ids = {e: idx for idx, e in enumerate(zip(*np.nonzero(g.capacity > 0)))}
    pair_ids = {pr: idx for idx, pr in enumerate(zip(*np.nonzero(T > 0)))}
    uses = [[edge_ids[(j, u)] for j, u in p.circuit_hops()] for p in paths]
    pair_of = [pair_ids[(p.source, p.destination)] for p in paths]
    cap0 = tuple(int(g.capacity[e]) for e in edge_ids)
    dem0 = tuple(int(T[pr]) for pr in pair_ids)

    @lru_cache(maxsize=None)
    def best(i, cap, dem):
        if i == len(paths):
            return 0
        value = best(i + 1, cap, dem)
        pr = pair_of[i]
        if dem[pr] > 0 and all(cap[e] > 0 for e in uses[i]):
            cap2 = list(cap)
            for e in uses[i]:
                cap2[e] -= 1
            dem2 = dem[:pr] + (dem[pr] - 1,) + dem[pr + 1 :]
            value = max(value, 1 + best(i, tuple(cap2), dem2))
        return value

    value = best(0, cap0, dem0)
    # replay the memo to recover one optimal packing
    counts = [0] * len(paths)
    i, cap, dem = 0, cap0, dem0
    while i < len(paths):
        here = best(i, cap, dem)
        if here == 0:
            break
        if here == best(i + 1, cap, dem):
            i += 1
            continue
        counts[i] += 1
        cap = tuple(c - (e in uses[i]) for e, c in enumerate(cap))
        pr = pair_of[i]
        dem = dem[:pr] + (dem[pr] - 1,) + dem[pr + 1 :]
    best.cache_clear()
    witness = [PathAssignment(c, p) for c, p in zip(counts, paths) if c]
    return OracleResult(value, witness)
