"""Input validation helpers, in the spirit of ``sklearn.utils.check_array``."""

from __future__ import annotations

import numpy as np

from .exceptions import DimensionMismatch


def check_demand(T, *, copy: bool = False) -> np.ndarray:
    """Coerce ``T`` to a square, nonnegative ``int64`` matrix.

    Accepts nested lists or any array-like. Float input is accepted only when
    every entry is integral.
    """
    arr = np.asarray(T)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"demand must be a square matrix, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise DimensionMismatch("demand must have at least one port")
    if arr.dtype.kind == "f":
        if not np.all(np.isfinite(arr)) or not np.all(arr == np.round(arr)):
            raise ValueError("demand entries must be integers (time slots)")
    elif arr.dtype.kind not in "iub":
        raise ValueError(f"unsupported demand dtype {arr.dtype}")
    out = arr.astype(np.int64, copy=copy)
    if np.any(out < 0):
        raise ValueError("demand entries must be nonnegative")
    return out


def check_nonnegative_int(value, name: str, *, minimum: int = 0) -> int:
    if isinstance(value, bool) or int(value) != value:
        raise ValueError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_same_ports(n: int, other: int, what: str = "matching") -> None:
    if n != other:
        raise DimensionMismatch(f"{what} is over {other} ports, demand has {n}")
