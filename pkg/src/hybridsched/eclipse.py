"""Eclipse: greedy direct-routing scheduler driven by effective utilization.

Each round picks the duration ``alpha`` and matching ``M`` maximizing
``||min(alpha*M, T_rem)||_1 / (alpha + delta)``. The maximizing ``alpha`` is
always one of the distinct nonzero entries of ``T_rem``, so the exact step
only scans those; the binary-search step probes ``O(log n)`` of them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .core import (
    Matching,
    Schedule,
    ScheduleEntry,
    SchedulerConfig,
    distinct_nonzero,
    validate_demand,
)
from .exceptions import EmptyDemand
from .matching import max_weight_matching, mwm_value
from .validation import check_demand, check_nonnegative_int


@dataclass(frozen=True)
class GreedyStepResult:
    alpha: int
    matching: Matching
    gain: int
    ratio: Fraction


def _prepare(T_rem, delta):
    T_rem = check_demand(T_rem)
    delta = check_nonnegative_int(delta, "delta")
    if not T_rem.any():
        raise EmptyDemand("greedy step on an all-zero demand matrix")
    return T_rem, delta


def _finish(T_rem: np.ndarray, alpha: int, delta: int) -> GreedyStepResult:
    matching, gain = max_weight_matching(np.minimum(T_rem, alpha))
    return GreedyStepResult(alpha, matching, gain, Fraction(gain, alpha + delta))


def greedy_step_exact(T_rem, delta: int) -> GreedyStepResult:
    """Global maximizer of effective utilization over all distinct entries."""
    T_rem, delta = _prepare(T_rem, delta)
    best = None
    for alpha in distinct_nonzero(T_rem):
        alpha = int(alpha)
        # (ratio, alpha) tuples: equal ratios go to the longer configuration
        cand = (Fraction(mwm_value(np.minimum(T_rem, alpha)), alpha + delta), alpha)
        if best is None or cand > best:
            best = cand
    return _finish(T_rem, best[1], delta)


def greedy_step_binary_search(T_rem, delta: int) -> GreedyStepResult:
    """Binary search for a local maximum of effective utilization.

    Compares the ratio at neighbouring candidates ``H[i]`` and ``H[i+1]`` and
    moves toward the larger one; equal ratios stop the search at ``H[i]``.
    When the bracket shrinks to two adjacent candidates the better one is
    returned, since moving the lower bound to the midpoint can no longer
    make progress there.
    """
    T_rem, delta = _prepare(T_rem, delta)
    H = [int(h) for h in distinct_nonzero(T_rem)]
    cache: dict[int, Fraction] = {}

    def util(i: int) -> Fraction:
        if i not in cache:
            cache[i] = Fraction(mwm_value(np.minimum(T_rem, H[i])), H[i] + delta)
        return cache[i]

    lo, hi = 0, len(H) - 1
    while lo < hi:
        if hi - lo == 1:
            return _finish(T_rem, H[hi] if util(hi) > util(lo) else H[lo], delta)
        i = (lo + hi) // 2
        v1, v2 = util(i), util(i + 1)
        if v1 < v2:
            lo = i
        elif v1 > v2:
            hi = i
        else:
            return _finish(T_rem, H[i], delta)
    return _finish(T_rem, H[lo], delta)


STEPS: dict[str, Callable[[np.ndarray, int], GreedyStepResult]] = {
    "exact": greedy_step_exact,
    "binary_search": greedy_step_binary_search,
    "bsearch": greedy_step_binary_search,
}


def eclipse(T, cfg: SchedulerConfig, step: str = "exact") -> Schedule:
    """Greedy schedule maximizing direct throughput within ``cfg.window``.

    Stops when the demand is fully covered or when the next greedy
    configuration would overrun the window; that configuration is dropped.
    """
    T = check_demand(T)
    validate_demand(T, cfg)
    try:
        step_fn = STEPS[step]
    except KeyError:
        raise ValueError(f"unknown greedy step {step!r}; choose from {sorted(STEPS)}") from None
    W, delta = cfg.window, cfg.delay
    T_rem = T.copy()
    entries: list[ScheduleEntry] = []
    used = 0
    while T_rem.any():
        res = step_fn(T_rem, delta)
        if used + res.alpha + delta > W:
            break
        entries.append(ScheduleEntry(res.alpha, res.matching))
        used += res.alpha + delta
        T_rem -= np.minimum(res.alpha * res.matching.to_array(T.shape[0]), T_rem)
    return Schedule(tuple(entries), window=W, delay=delta)
