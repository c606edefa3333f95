"""scikit-learn style wrappers around the schedulers.

``fit(T)`` computes a schedule for demand ``T`` and stores it in
``schedule_``; ``transform(T)`` returns the demand left over for the packet
switch; ``score(T)`` is the fraction of ``T`` served over the circuit switch.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .baselines import bvn_schedule, solstice_schedule
from .core import SchedulerConfig, direct_throughput, residual_demand
from .eclipse import eclipse
from .exceptions import NotFittedError
from .indirect import EclipseppConfig, RESIDUAL, eclipsepp, indirect_throughput
from .validation import check_demand


def _fraction(delivered: int, T: np.ndarray) -> float:
    return delivered / max(int(T.sum()), 1)


class _ScheduleEstimator(BaseEstimator):
    def __init__(self, window: int = 1000, delay: int = 10):
        self.window = window
        self.delay = delay

    def _config(self) -> SchedulerConfig:
        return SchedulerConfig(delay=self.delay, window=self.window)

    def _build(self, T, cfg):  # pragma: no cover - abstract
        raise NotImplementedError

    def _check_fitted(self):
        if not hasattr(self, "schedule_"):
            raise NotFittedError(f"{type(self).__name__} is not fitted yet; call fit(T) first")

    def fit(self, T, y=None):
        T = check_demand(T)
        self.schedule_ = self._build(T, self._config())
        self.n_ports_ = T.shape[0]
        self.throughput_ = direct_throughput(T, self.schedule_)
        return self

    def predict(self, T=None) -> np.ndarray:
        """Circuit configuration sum ``sum_i alpha_i M_i`` of the fitted schedule."""
        self._check_fitted()
        return self.schedule_.configuration_sum(self.n_ports_)

    def transform(self, T) -> np.ndarray:
        self._check_fitted()
        return residual_demand(T, self.schedule_)

    def fit_transform(self, T, y=None) -> np.ndarray:
        return self.fit(T).transform(T)

    def score(self, T, y=None) -> float:
        self._check_fitted()
        T = check_demand(T)
        return _fraction(direct_throughput(T, self.schedule_), T)


class EclipseScheduler(_ScheduleEstimator):
    """Greedy submodular scheduler; ``step`` is ``"exact"`` or ``"bsearch"``."""

    def __init__(self, window: int = 1000, delay: int = 10, step: str = "exact"):
        super().__init__(window=window, delay=delay)
        self.step = step

    def _build(self, T, cfg):
        return eclipse(T, cfg, step=self.step)


class SolsticeScheduler(_ScheduleEstimator):
    def _build(self, T, cfg):
        return solstice_schedule(T, cfg)


class BvnScheduler(_ScheduleEstimator):
    def _build(self, T, cfg):
        return bvn_schedule(T, cfg)


class EclipsePlusPlusRouter(EclipseScheduler):
    """Eclipse schedule followed by multi-hop routing over its configurations.

    In ``residual`` mode, the paths carry only what direct delivery left behind,
    so ``throughput_`` is the sum of both. In ``full`` mode, every unit travels
    on a path and ``throughput_`` is the routed total.
    """

    def __init__(
        self,
        window: int = 1000,
        delay: int = 10,
        step: str = "exact",
        mode: str = RESIDUAL,
        lam: float | None = None,
        unit_increment: bool = False,
    ):
        super().__init__(window=window, delay=delay, step=step)
        self.mode = mode
        self.lam = lam
        self.unit_increment = unit_increment

    def _route(self, T):
        cfg = EclipseppConfig(lam=self.lam, mode=self.mode, unit_increment=self.unit_increment)
        return eclipsepp(T, self.schedule_, cfg)

    def _routed_total(self, T, assignments) -> int:
        if self.mode == RESIDUAL:
            return direct_throughput(T, self.schedule_) + indirect_throughput(
                assignments, residual_demand(T, self.schedule_)
            )
        return indirect_throughput(assignments, T)

    def fit(self, T, y=None):
        T = check_demand(T)
        super().fit(T)
        self.direct_throughput_ = self.throughput_
        self.assignments_ = self._route(T)
        self.throughput_ = self._routed_total(T, self.assignments_)
        return self

    def transform(self, T) -> np.ndarray:
        """Demand left after direct delivery and the fitted path flows."""
        self._check_fitted()
        T = check_demand(T)
        left = residual_demand(T, self.schedule_) if self.mode == RESIDUAL else T.copy()
        for a in self.assignments_:
            s, d = a.path.source, a.path.destination
            left[s, d] -= min(a.beta, left[s, d])
        return left

    def score(self, T, y=None) -> float:
        self._check_fitted()
        T = check_demand(T)
        return _fraction(self._routed_total(T, self.assignments_), T)
