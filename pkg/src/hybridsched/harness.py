"""Parameter sweeps over generated demand, reported as throughput fractions."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Sequence

import numpy as np

from .baselines import bvn_schedule, solstice_schedule
from .core import SchedulerConfig, direct_throughput, residual_demand
from .eclipse import eclipse
from .exceptions import SchedulingError, SpecMismatch
from .indirect import EclipseppConfig, eclipsepp, indirect_throughput
from .trafficgen import (
    DEFAULT_WINDOW,
    SingleBlockSpec,
    flow_variation_spec,
    generate,
    two_block_spec,
)

SWEEP_VARS = ("delay", "skew", "sparsity", "block_size", "flow_variation", "load")
MODELS = ("single", "two_block", "flow_variation")
CSV_HEADER = ("sweep_var", "sweep_value", "algorithm", "mean_throughput", "std_throughput", "trials")


def _eclipse(step):
    return lambda T, cfg: direct_throughput(T, eclipse(T, cfg, step=step))


def _eclipsepp(T, cfg, step="bsearch"):
    s = eclipse(T, cfg, step=step)
    direct = direct_throughput(T, s)
    paths = eclipsepp(T, s, EclipseppConfig())
    return direct + indirect_throughput(paths, residual_demand(T, s))


ALGORITHMS: dict[str, Callable[[np.ndarray, SchedulerConfig], int]] = {
    "eclipse": _eclipse("bsearch"),
    "eclipse_exact": _eclipse("exact"),
    "solstice": lambda T, cfg: direct_throughput(T, solstice_schedule(T, cfg)),
    "bvn": lambda T, cfg: direct_throughput(T, bvn_schedule(T, cfg)),
    "eclipsepp": _eclipsepp,
}


class SweepError(SchedulingError):
    """A trial failed; carries the grid point that triggered it."""

    def __init__(self, sweep_var: str, value, trial: int, cause: Exception):
        super().__init__(f"{sweep_var}={value} trial {trial}: {type(cause).__name__}: {cause}")
        self.sweep_var = sweep_var
        self.value = value
        self.trial = trial
        self.cause = cause


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: a traffic model, the algorithms to compare and a value grid.

    ``traffic`` holds keyword overrides for the model's spec. The sweep
    variable is applied on top of it for every grid point:

    * ``delay``: reconfiguration delay in slots
    * ``skew``: fraction of traffic carried by small flows
    * ``sparsity``: total flows per port, split 1:3 between large and small
    * ``block_size``: size of the uniform block (``two_block`` model)
    * ``flow_variation``: sigma of the per-block flow count (``flow_variation`` model)
    * ``load``: per-port traffic as a fraction of the window
    """

    sweep_var: str
    grid: tuple = ()
    algorithms: tuple[str, ...] = ("eclipse", "solstice", "bvn")
    model: str = "single"
    traffic: dict[str, Any] = field(default_factory=dict)
    delay: int = 10
    window: int = DEFAULT_WINDOW
    trials: int = 10
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(self.grid))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if self.sweep_var not in SWEEP_VARS:
            raise SpecMismatch(f"unknown sweep variable {self.sweep_var!r}; choose from {SWEEP_VARS}")
        if self.model not in MODELS:
            raise SpecMismatch(f"unknown model {self.model!r}; choose from {MODELS}")
        if not self.grid:
            raise SpecMismatch("grid must be nonempty")
        if self.trials < 1:
            raise SpecMismatch("trials must be >= 1")
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown:
            raise SpecMismatch(f"unknown algorithms {unknown}; choose from {sorted(ALGORITHMS)}")

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentConfig":
        return cls(**data)


@dataclass(frozen=True)
class ResultRow:
    sweep_var: str
    sweep_value: float
    algorithm: str
    mean_throughput: float
    std_throughput: float
    trials: int


def _traffic_spec(cfg: ExperimentConfig, value, rng):
    kw = dict(cfg.traffic)
    kw.setdefault("window", cfg.window)
    var = cfg.sweep_var
    if var == "skew":
        kw.update(c_small=float(value), c_large=1.0 - float(value))
    elif var == "sparsity":
        total = int(value)
        kw.update(n_large=total // 4, n_small=total - total // 4)
    elif var == "load":
        kw["load"] = float(value)

    if cfg.model == "flow_variation":
        sigma = float(value) if var == "flow_variation" else kw.pop("sigma", 0.0)
        kw.pop("sigma", None)
        return flow_variation_spec(sigma, rng, **kw)
    if var == "flow_variation":
        raise SpecMismatch("flow_variation sweeps need model='flow_variation'")
    if cfg.model == "two_block":
        if var == "block_size":
            kw["uniform_size"] = int(value)
        return two_block_spec(**kw)
    if var == "block_size":
        raise SpecMismatch("block_size sweeps need model='two_block'")
    return SingleBlockSpec(**kw)


def trial_rng(seed: int, point: int, trial: int) -> np.random.Generator:
    """Independent stream per (grid point, trial), fixed by the master seed."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(point, trial)))


def _run_trial(cfg: ExperimentConfig, point: int, trial: int) -> list[float]:
    value = cfg.grid[point]
    try:
        rng = trial_rng(cfg.seed, point, trial)
        T = generate(_traffic_spec(cfg, value, rng), rng)
        delay = int(value) if cfg.sweep_var == "delay" else cfg.delay
        scfg = SchedulerConfig(delay=delay, window=cfg.window)
        total = max(int(T.sum()), 1)
        return [ALGORITHMS[a](T, scfg) / total for a in cfg.algorithms]
    except Exception as exc:
        raise SweepError(cfg.sweep_var, value, trial, exc) from exc


def run_sweep(cfg: ExperimentConfig, n_jobs: int = 1) -> list[ResultRow]:
    """Mean and std of the served fraction at each grid point, per algorithm."""
    jobs = [(p, t) for p in range(len(cfg.grid)) for t in range(cfg.trials)]
    if n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            fractions = list(pool.map(_run_trial, [cfg] * len(jobs), *zip(*jobs)))
    else:
        fractions = [_run_trial(cfg, p, t) for p, t in jobs]
    by_point = np.array(fractions).reshape(len(cfg.grid), cfg.trials, len(cfg.algorithms))

    rows = []
    for p, value in enumerate(cfg.grid):
        for a, name in enumerate(cfg.algorithms):
            vals = by_point[p, :, a]
            rows.append(
                ResultRow(cfg.sweep_var, value, name, float(vals.mean()), float(vals.std()), cfg.trials)
            )
    return rows


def export_csv(rows: Sequence[ResultRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(
            [r.sweep_var, f"{float(r.sweep_value):.6f}", r.algorithm,
             f"{r.mean_throughput:.6f}", f"{r.std_throughput:.6f}", r.trials]
        )
    return buf.getvalue()


def parse_csv(text: str) -> list[ResultRow]:
    reader = csv.DictReader(io.StringIO(text))
    return [
        ResultRow(
            d["sweep_var"], float(d["sweep_value"]), d["algorithm"],
            float(d["mean_throughput"]), float(d["std_throughput"]), int(d["trials"]),
        )
        for d in reader
    ]


def delay_grid(window: int = DEFAULT_WINDOW) -> tuple[int, ...]:
    """Delays from ``W/3200`` to ``4W/100`` in slots, at least one slot."""
    fractions = [1 / 3200, 1 / 1600, 1 / 800, 1 / 400, 1 / 200, 1 / 100, 2 / 100, 3 / 100, 4 / 100]
    return tuple(sorted({max(1, math.floor(f * window)) for f in fractions}))


def full_scale(cfg: ExperimentConfig) -> ExperimentConfig:
    """25 trials, and 200 ports for direct-routing sweeps."""
    traffic = dict(cfg.traffic)
    if "eclipsepp" not in cfg.algorithms and cfg.model == "single":
        traffic["n"] = 200
    return replace(cfg, trials=25, traffic=traffic)
