"""Domain types for a hybrid circuit/packet switch and throughput accounting.

Demand matrices are plain ``int64`` numpy arrays; entry ``(i, j)`` is the
VOQ backlog, in time slots, at input ``i`` destined to output ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .exceptions import DimensionMismatch, InfeasibleDemand
from .validation import check_demand, check_nonnegative_int

TrafficMatrix = np.ndarray


@dataclass(frozen=True)
class Matching:
    """A partial one-to-one map from input ports to output ports.

    Pairs are stored sorted, so two matchings with the same pair set compare
    equal and order lexicographically by their sorted pair lists.
    """

    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        pairs = tuple(sorted((int(i), int(j)) for i, j in self.pairs))
        ins = [i for i, _ in pairs]
        outs = [j for _, j in pairs]
        if len(set(ins)) != len(ins) or len(set(outs)) != len(outs):
            raise ValueError(f"not a matching: {pairs}")
        if any(i < 0 or j < 0 for i, j in pairs):
            raise ValueError("port indices must be nonnegative")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def identity(cls, n: int) -> "Matching":
        return cls(tuple((i, i) for i in range(n)))

    @classmethod
    def from_permutation(cls, perm: Sequence[int]) -> "Matching":
        return cls(tuple((i, int(j)) for i, j in enumerate(perm)))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __lt__(self, other: "Matching") -> bool:
        return self.pairs < other.pairs

    @property
    def max_port(self) -> int:
        return max((max(i, j) for i, j in self.pairs), default=-1)

    def is_perfect(self, n: int) -> bool:
        return len(self.pairs) == n

    def to_array(self, n: int) -> np.ndarray:
        """0/1 ``n x n`` matrix of this matching."""
        if self.max_port >= n:
            raise DimensionMismatch(f"matching uses port {self.max_port}, only {n} ports")
        arr = np.zeros((n, n), dtype=np.int64)
        if self.pairs:
            rows, cols = zip(*self.pairs)
            arr[list(rows), list(cols)] = 1
        return arr

    def destination(self, port: int) -> int | None:
        for i, j in self.pairs:
            if i == port:
                return j
        return None


@dataclass(frozen=True)
class ScheduleEntry:
    duration: int
    matching: Matching

    def __post_init__(self):
        object.__setattr__(self, "duration", check_nonnegative_int(self.duration, "duration", minimum=1))
        if not isinstance(self.matching, Matching):
            object.__setattr__(self, "matching", Matching(tuple(self.matching)))


@dataclass(frozen=True)
class Schedule:
    """An ordered sequence of circuit configurations within one window."""

    entries: tuple[ScheduleEntry, ...] = ()
    window: int = 1
    delay: int = 0

    def __post_init__(self):
        entries = tuple(
            e if isinstance(e, ScheduleEntry) else ScheduleEntry(*e) for e in self.entries
        )
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "window", check_nonnegative_int(self.window, "window", minimum=1))
        object.__setattr__(self, "delay", check_nonnegative_int(self.delay, "delay"))
        if schedule_duration(self) > self.window:
            raise ValueError(
                f"schedule occupies {schedule_duration(self)} slots, window is {self.window}"
            )

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def durations(self) -> list[int]:
        return [e.duration for e in self.entries]

    @property
    def matchings(self) -> list[Matching]:
        return [e.matching for e in self.entries]

    def configuration_sum(self, n: int) -> np.ndarray:
        """``sum_i alpha_i M_i`` as an ``n x n`` integer matrix."""
        total = np.zeros((n, n), dtype=np.int64)
        for e in self.entries:
            total += e.duration * e.matching.to_array(n)
        return total


@dataclass(frozen=True)
class SchedulerConfig:
    delay: int = 0
    window: int = 1
    epsilon: float = 0.5
    rng_seed: int = 0

    def __post_init__(self):
        check_nonnegative_int(self.delay, "delay")
        check_nonnegative_int(self.window, "window", minimum=1)
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        check_nonnegative_int(self.rng_seed, "rng_seed")


@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def raise_for_errors(self) -> None:
        if self.errors:
            raise InfeasibleDemand("; ".join(self.errors))


def validate_demand(T, cfg: SchedulerConfig, *, strict: bool = True) -> ValidationReport:
    """Check feasibility of ``T`` against the window and the entry bounds.

    Row or column sums above the window are errors (raised as
    :class:`InfeasibleDemand` unless ``strict=False``). Nonzero entries
    outside ``[2*delay, epsilon*window + delay]`` only produce warnings:
    the schedulers still run, but the approximation guarantee is void.
    """
    T = check_demand(T)
    report = ValidationReport()
    W = cfg.window
    for axis, name in ((1, "row"), (0, "column")):
        sums = T.sum(axis=axis)
        for idx in np.flatnonzero(sums > W):
            report.errors.append(f"{name} {idx} sums to {sums[idx]} > window {W}")
    nz = T[T > 0]
    low = int(np.count_nonzero(nz < 2 * cfg.delay))
    if low:
        report.warnings.append(f"{low} nonzero entries below 2*delay={2 * cfg.delay}")
    cap = cfg.epsilon * W + cfg.delay
    high = int(np.count_nonzero(nz > cap))
    if high:
        report.warnings.append(f"{high} entries above epsilon*window+delay={cap:g}")
    if strict:
        report.raise_for_errors()
    return report


def schedule_duration(s: Schedule) -> int:
    """Total slots used: durations plus one reconfiguration per entry."""
    return sum(e.duration for e in s.entries) + len(s.entries) * s.delay


def threshold(T, alpha: int) -> np.ndarray:
    """Entrywise ``min(T, alpha)``."""
    alpha = check_nonnegative_int(alpha, "alpha")
    return np.minimum(check_demand(T), alpha)


def _check_schedule_ports(T: np.ndarray, s: Schedule) -> None:
    n = T.shape[0]
    for e in s.entries:
        if e.matching.max_port >= n:
            raise DimensionMismatch(
                f"schedule matching uses port {e.matching.max_port}, demand has {n} ports"
            )


def direct_throughput(T, s: Schedule) -> int:
    """Traffic delivered over single-hop circuits: ``||min(sum alpha_i M_i, T)||_1``."""
    T = check_demand(T)
    _check_schedule_ports(T, s)
    return int(np.minimum(s.configuration_sum(T.shape[0]), T).sum())


def residual_demand(T, s: Schedule) -> np.ndarray:
    """Demand left for the packet switch after direct delivery by ``s``."""
    T = check_demand(T)
    _check_schedule_ports(T, s)
    return T - np.minimum(s.configuration_sum(T.shape[0]), T)


def throughput_of_pairs(T, entries: Iterable[tuple[int, Matching]]) -> int:
    """Eq.-(4)-style objective for an unordered collection of (alpha, M) pairs.

    Unlike :func:`direct_throughput` this does not require the pairs to fit
    in a window, which is what the set-function property tests need.
    """
    T = check_demand(T)
    n = T.shape[0]
    total = np.zeros((n, n), dtype=np.int64)
    for alpha, m in entries:
        total += int(alpha) * m.to_array(n)
    return int(np.minimum(total, T).sum())


def distinct_nonzero(T) -> np.ndarray:
    """Sorted distinct positive entries of ``T``."""
    T = np.asarray(T)
    return np.unique(T[T > 0])

