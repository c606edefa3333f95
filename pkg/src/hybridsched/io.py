"""JSON file formats for demand matrices, schedules and path assignments.

Port indices are 0-based everywhere.
"""

from __future__ import annotations

import json
from pathlib import Path as FsPath
from typing import Any

import numpy as np

from .core import Matching, Schedule, ScheduleEntry, SchedulerConfig
from .exceptions import DimensionMismatch
from .indirect import Path, PathAssignment
from .validation import check_demand, check_nonnegative_int


def demand_to_dict(T, cfg: SchedulerConfig) -> dict[str, Any]:
    T = check_demand(T)
    return {"n": int(T.shape[0]), "window": cfg.window, "delay": cfg.delay, "entries": T.tolist()}


def demand_from_dict(data: dict[str, Any]) -> tuple[np.ndarray, SchedulerConfig]:
    T = check_demand(data["entries"])
    n = check_nonnegative_int(data.get("n", T.shape[0]), "n")
    if n != T.shape[0]:
        raise DimensionMismatch(f"header says n={n} but entries are {T.shape[0]}x{T.shape[0]}")
    cfg = SchedulerConfig(delay=int(data.get("delay", 0)), window=int(data["window"]))
    return T, cfg


def schedule_to_dict(s: Schedule) -> dict[str, Any]:
    return {
        "window": s.window,
        "delay": s.delay,
        "entries": [{"duration": e.duration, "pairs": [list(p) for p in e.matching.pairs]} for e in s],
    }


def schedule_from_dict(data: dict[str, Any]) -> Schedule:
    entries = [
        ScheduleEntry(int(e["duration"]), Matching(tuple((int(i), int(j)) for i, j in e["pairs"])))
        for e in data["entries"]
    ]
    return Schedule(tuple(entries), window=int(data["window"]), delay=int(data.get("delay", 0)))


def assignments_to_dict(assignments) -> dict[str, Any]:
    return {
        "assignments": [
            {"beta": a.beta, "nodes": [[int(j), int(u)] for j, u in a.path.nodes]} for a in assignments
        ]
    }


def assignments_from_dict(data: dict[str, Any]) -> list[PathAssignment]:
    return [
        PathAssignment(int(a["beta"]), Path(tuple((int(j), int(u)) for j, u in a["nodes"])))
        for a in data["assignments"]
    ]


def read_json(path) -> dict[str, Any]:
    with open(FsPath(path)) as fh:
        return json.load(fh)


def write_json(path, data: dict[str, Any]) -> None:
    text = json.dumps(data)
    if path is None or str(path) == "-":
        print(text)
        return
    FsPath(path).write_text(text + "\n")
