"""Indirect (multi-hop) routing over a fixed sequence of circuit configurations.

The schedule is unrolled into a time-layered DAG with ``k + 1`` layers of
``n`` nodes. Round ``j`` contributes one capacitated edge per matched pair
``u -> M_j(u)`` plus a free "hold" edge ``u -> u`` modelling buffering in a
VOQ. Eclipse++ packs demand onto end-to-end paths of this DAG with a
multiplicative-weights rule.

Self-loop circuit edges ``u -> u`` are left out of the DAG: they move no
traffic between ports, so only off-diagonal demand is routed indirectly.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.special import logsumexp

from .core import Schedule
from .exceptions import DimensionMismatch
from .validation import check_demand

FULL = "full"
RESIDUAL = "residual"


@dataclass(frozen=True)
class LayeredGraph:
    """Time-layered capacity graph.

    ``dest[j, u]`` is the port that ``u`` is connected to in round ``j``
    (``-1`` if none) and ``capacity[j, u]`` the capacity of that edge.
    ``demand`` is the traffic matrix this graph is meant to carry.
    """

    n: int
    dest: np.ndarray
    capacity: np.ndarray
    demand: np.ndarray = field(repr=False)

    @property
    def k(self) -> int:
        return self.dest.shape[0]

    def matching_edges(self, round_: int) -> list[tuple[int, int, int]]:
        us = np.flatnonzero(self.dest[round_] >= 0)
        return [(int(u), int(self.dest[round_, u]), int(self.capacity[round_, u])) for u in us]

    @property
    def num_capacitated_edges(self) -> int:
        return int(np.count_nonzero(self.capacity > 0))


@dataclass(frozen=True)
class Path:
    """Node sequence ``(layer, port)`` from layer 0 to layer k."""

    nodes: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple((int(a), int(b)) for a, b in self.nodes))

    @property
    def source(self) -> int:
        return self.nodes[0][1]

    @property
    def destination(self) -> int:
        return self.nodes[-1][1]

    def circuit_hops(self) -> list[tuple[int, int]]:
        """``(round, from_port)`` for every circuit edge traversed."""
        return [
            (j, u)
            for j, ((_, u), (_, v)) in enumerate(zip(self.nodes, self.nodes[1:]))
            if u != v
        ]


@dataclass(frozen=True)
class PathAssignment:
    beta: int
    path: Path

    def __post_init__(self):
        if int(self.beta) < 1:
            raise ValueError("beta must be a positive integer")
        object.__setattr__(self, "beta", int(self.beta))


@dataclass(frozen=True)
class EclipseppConfig:
    """``lam`` overrides the default update factor ``exp(1/eta) * n * k``.

    ``unit_increment`` routes one unit per iteration instead of the whole
    pending demand of the chosen pair, which spreads load more evenly.
    """

    lam: float | None = None
    mode: str = RESIDUAL
    unit_increment: bool = False

    def __post_init__(self):
        if self.mode not in (FULL, RESIDUAL):
            raise ValueError(f"mode must be 'full' or 'residual', got {self.mode!r}")
        if self.lam is not None and not self.lam > 1:
            raise ValueError("lambda must exceed 1")


def build_layered_graph(s: Schedule, mode: str, T) -> LayeredGraph:
    """Unroll ``s`` into a layered graph.

    In ``full`` mode circuit edges carry their whole duration and the whole
    of ``T`` is to be routed. In ``residual`` mode the direct delivery of
    ``s`` is replayed round by round and subtracted from both.
    """
    T = check_demand(T)
    if mode not in (FULL, RESIDUAL):
        raise ValueError(f"mode must be 'full' or 'residual', got {mode!r}")
    n, k = T.shape[0], len(s)
    dest = np.full((k, n), -1, dtype=np.int64)
    cap = np.zeros((k, n), dtype=np.int64)
    T_rem = T.copy()
    for j, entry in enumerate(s.entries):
        if entry.matching.max_port >= n:
            raise DimensionMismatch(f"round {j} uses port {entry.matching.max_port}, n={n}")
        for u, v in entry.matching.pairs:
            sent = min(entry.duration, T_rem[u, v])
            if mode == RESIDUAL:
                T_rem[u, v] -= sent
            if u == v:
                continue
            dest[j, u] = v
            cap[j, u] = entry.duration - sent if mode == RESIDUAL else entry.duration
    return LayeredGraph(n, dest, cap, T_rem if mode == RESIDUAL else T)


def reachable_set(g: LayeredGraph, source: int) -> set[int]:
    """Ports reachable from ``source`` by layer k over positive-capacity edges."""
    reach = {int(source)}
    for j in range(g.k):
        reach |= {
            int(g.dest[j, u]) for u in reach if g.dest[j, u] >= 0 and g.capacity[j, u] > 0
        }
    reach.discard(int(source))
    return reach


def _shortest_paths(g: LayeredGraph, weights: np.ndarray, usable: np.ndarray):
    """All-sources shortest distances to layer k, plus per-round predecessors."""
    n = g.n
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    preds = []
    for j in range(g.k):
        us = np.flatnonzero(usable[j])
        vs = g.dest[j, us]
        pred = np.full((n, n), -1, dtype=np.int64)
        if us.size:
            via = dist[:, us] + weights[j, us]
            better = via < dist[:, vs]
            new = dist.copy()
            new[:, vs] = np.where(better, via, dist[:, vs])
            pred[:, vs] = np.where(better, us, -1)
            dist = new
        preds.append(pred)
    return dist, preds


def _trace(preds, k: int, s: int, d: int) -> Path:
    nodes = [(k, d)]
    v = d
    for j in range(k - 1, -1, -1):
        u = preds[j][s, v]
        v = v if u < 0 else int(u)
        nodes.append((j, v))
    return Path(tuple(reversed(nodes)))


def best_path(g: LayeredGraph, weights, T_rem, usable=None) -> tuple[int, Path] | None:
    """Lightest path whose endpoints still have demand, with ``beta = T_rem(src, dst)``.

    One forward sweep over the layers gives shortest ``weights``-distances
    from every source to every layer-k node; the lightest pair with pending
    demand wins, ties going to the smaller ``(src, dst)``. ``usable`` masks
    the circuit edges that may be used (default: positive capacity).
    """
    T_rem = check_demand(T_rem)
    weights = np.asarray(weights, dtype=float)
    if usable is None:
        usable = g.capacity > 0
    usable = usable & (g.dest >= 0)
    dist, preds = _shortest_paths(g, weights, usable)
    cand = np.where((T_rem > 0) & np.isfinite(dist), dist, np.inf)
    np.fill_diagonal(cand, np.inf)
    flat = int(np.argmin(cand))
    s, d = divmod(flat, g.n)
    if not np.isfinite(cand[s, d]):
        return None
    return int(T_rem[s, d]), _trace(preds, g.k, s, d)


def compute_eta(g: LayeredGraph, T=None) -> float:
    """``max T(i, j) / R(e)`` over positive-capacity circuit edges."""
    T = g.demand if T is None else check_demand(T)
    caps = g.capacity[g.capacity > 0]
    if caps.size == 0 or not T.any():
        return 0.0
    return float(T.max()) / float(caps.min())


def default_log_lambda(g: LayeredGraph, T=None) -> float:
    """``log(exp(1/eta) * n * k)``, kept in log space to avoid overflow."""
    eta = compute_eta(g, T)
    if eta == 0.0:
        return math.inf
    return 1.0 / eta + math.log(g.n * max(g.k, 1))


def edge_loads(g: LayeredGraph, assignments: Iterable[PathAssignment]) -> np.ndarray:
    """Flow routed over each circuit edge, shaped like ``g.capacity``."""
    load = np.zeros_like(g.capacity)
    for a in assignments:
        for j, u in a.path.circuit_hops():
            load[j, u] += a.beta
    return load


def check_path(g: LayeredGraph, path: Path) -> None:
    """Raise ``ValueError`` unless ``path`` follows hold or circuit edges of ``g``."""
    if len(path.nodes) != g.k + 1:
        raise ValueError(f"path has {len(path.nodes)} nodes, graph has {g.k + 1} layers")
    for j, ((la, u), (lb, v)) in enumerate(zip(path.nodes, path.nodes[1:])):
        if la != j or lb != j + 1:
            raise ValueError(f"path layers out of order at hop {j}")
        if u != v and g.dest[j, u] != v:
            raise ValueError(f"no circuit {u}->{v} in round {j}")


def eclipsepp(T, s: Schedule, cfg: EclipseppConfig | None = None) -> list[PathAssignment]:
    """Multiplicative-weights indirect routing on the configurations of ``s``.

    Circuit edge weights start at ``1/R(e)`` and grow by
    ``lam ** (beta / R(e))`` whenever a path of flow ``beta`` uses them. Each
    iteration routes the lightest path with pending demand, until the
    weighted capacity ``sum_e R(e) w_e`` exceeds ``lam`` or demand runs out.

    ``beta`` is additionally capped at the path's bottleneck residual
    capacity and exhausted edges are skipped, so every intermediate state is
    capacity-feasible; the final over-capacity check is kept as a guard.
    """
    cfg = cfg or EclipseppConfig()
    g = build_layered_graph(s, cfg.mode, T)
    return route_layered(g, lam=cfg.lam, unit_increment=cfg.unit_increment)


def route_layered(g: LayeredGraph, lam: float | None = None, T=None, unit_increment: bool = False) -> list[PathAssignment]:
    """Eclipse++ on an already-built layered graph (demand defaults to ``g.demand``)."""
    T_rem = (g.demand if T is None else check_demand(T)).copy()
    np.fill_diagonal(T_rem, 0)
    R = g.capacity.astype(float)
    live = (g.capacity > 0) & (g.dest >= 0)
    if not live.any() or not T_rem.any():
        return []
    log_lam = math.log(lam) if lam is not None else default_log_lambda(g, T_rem)
    log_R = np.log(R[live])
    log_w = np.zeros_like(R)
    log_w[live] = -log_R
    used = np.zeros_like(g.capacity)
    out: list[PathAssignment] = []
    while T_rem.any() and logsumexp(log_R + log_w[live]) <= log_lam:
        usable = live & (used < g.capacity)
        # rescale before exponentiating; shortest paths are scale invariant
        shift = log_w[usable].max() - 600.0 if usable.any() else 0.0
        weights = np.where(usable, np.exp(log_w - shift), 0.0)
        found = best_path(g, weights, T_rem, usable=usable)
        if found is None:
            break
        beta, path = found
        hops = path.circuit_hops()
        beta = min([1 if unit_increment else beta] + [int(g.capacity[j, u] - used[j, u]) for j, u in hops])
        out.append(PathAssignment(beta, path))
        T_rem[path.source, path.destination] -= beta
        for j, u in hops:
            used[j, u] += beta
            log_w[j, u] += beta / R[j, u] * log_lam
    if out and np.any(used > g.capacity):  # pragma: no cover - excluded by the cap above
        out.pop()
    return out


def indirect_throughput(assignments: Sequence[PathAssignment], T) -> int:
    """Demand met by path flows, capped entrywise by ``T``."""
    T = check_demand(T)
    flow: dict[tuple[int, int], int] = defaultdict(int)
    for a in assignments:
        flow[a.path.source, a.path.destination] += a.beta
    return int(sum(min(f, int(T[i, j])) for (i, j), f in flow.items()))
