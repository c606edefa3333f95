"""Synthetic demand matrices: sparse skewed blocks built from random permutations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .core import Matching
from .exceptions import SpecMismatch

DEFAULT_WINDOW = 1000


def _rng(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


@dataclass(frozen=True)
class SingleBlockSpec:
    """``n_large`` permutations sharing ``c_large`` of each port's load, likewise for small flows.

    ``load`` is the per-port traffic as a fraction of the window and
    ``noise_std`` the Gaussian noise level as a fraction of the window.
    """

    n: int = 100
    n_large: int = 4
    n_small: int = 12
    c_large: float = 0.7
    c_small: float = 0.3
    noise_std: float = 0.003
    window: int = DEFAULT_WINDOW
    load: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise SpecMismatch("n must be >= 1")
        if self.n_large < 0 or self.n_small < 0:
            raise SpecMismatch("flow counts must be nonnegative")
        if self.c_large < 0 or self.c_small < 0 or self.c_large + self.c_small > 1 + 1e-9:
            raise SpecMismatch("traffic fractions must be nonnegative and sum to at most 1")
        if self.noise_std < 0 or self.load < 0 or self.window < 1:
            raise SpecMismatch("noise, load and window must be nonnegative (window >= 1)")


@dataclass(frozen=True)
class UniformBlockSpec:
    """Every entry of the block carries ``load * window / n`` plus noise."""

    n: int
    noise_std: float = 0.003
    window: int = DEFAULT_WINDOW
    load: float = 1.0


BlockSpec = Union[SingleBlockSpec, UniformBlockSpec]


@dataclass(frozen=True)
class MultiBlockSpec:
    """Blocks placed along the diagonal; ``n`` must equal the sum of block sizes."""

    n: int
    blocks: tuple[BlockSpec, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))


def random_permutation_matrix(n: int, rng=None) -> Matching:
    """Uniformly random full permutation of ``n`` ports."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Matching.from_permutation(_rng(rng).permutation(n))


def _finalize(T: np.ndarray, noise_std: float, window: int, rng) -> np.ndarray:
    nz = T > 0
    if noise_std > 0:
        T = T + np.where(nz, rng.normal(0.0, noise_std * window, T.shape), 0.0)
    T = np.rint(np.maximum(T, 0.0)).astype(np.int64)
    return _rescale(T, window)


def _shrink_rows(T: np.ndarray, window: int) -> np.ndarray:
    """Scale rows summing above ``window`` to exactly ``window``, largest-remainder rounding."""
    sums = T.sum(axis=1)
    for i in np.flatnonzero(sums > window):
        exact = T[i] * (window / sums[i])
        row = np.floor(exact).astype(np.int64)
        short = window - int(row.sum())
        # stable order keeps ties deterministic
        order = np.argsort(-(exact - row), kind="stable")[:short]
        row[order] += 1
        T[i] = row
    return T


def _rescale(T: np.ndarray, window: int) -> np.ndarray:
    """Shrink any row, then any column, whose sum exceeds ``window``."""
    T = _shrink_rows(T.astype(np.int64).copy(), window)
    return _shrink_rows(T.T.copy(), window).T.copy()


def gen_single_block(spec: SingleBlockSpec, rng=None) -> np.ndarray:
    """Weighted sum of random permutations plus noise on the nonzero entries."""
    rng = _rng(rng)
    n, W = spec.n, spec.window
    T = np.zeros((n, n))
    rows = np.arange(n)
    for count, frac in ((spec.n_large, spec.c_large), (spec.n_small, spec.c_small)):
        if count == 0 or frac == 0:
            continue
        weight = frac * spec.load * W / count
        for _ in range(count):
            T[rows, rng.permutation(n)] += weight
    return _finalize(T, spec.noise_std, W, rng)


def gen_uniform_block(spec: UniformBlockSpec, rng=None) -> np.ndarray:
    rng = _rng(rng)
    T = np.full((spec.n, spec.n), spec.load * spec.window / spec.n)
    return _finalize(T, spec.noise_std, spec.window, rng)


def _gen_block(spec: BlockSpec, rng) -> np.ndarray:
    if isinstance(spec, UniformBlockSpec):
        return gen_uniform_block(spec, rng)
    return gen_single_block(spec, rng)


def gen_multi_block(spec: MultiBlockSpec, rng=None) -> np.ndarray:
    """Block-diagonal demand; entries outside the blocks are zero."""
    rng = _rng(rng)
    sizes = [b.n for b in spec.blocks]
    if sum(sizes) != spec.n:
        raise SpecMismatch(f"block sizes {sizes} sum to {sum(sizes)}, expected n={spec.n}")
    T = np.zeros((spec.n, spec.n), dtype=np.int64)
    start = 0
    for block, size in zip(spec.blocks, sizes):
        if size:
            T[start : start + size, start : start + size] = _gen_block(block, rng)
        start += size
    return T


def two_block_spec(n: int = 200, uniform_size: int = 50, **sparse_kwargs) -> MultiBlockSpec:
    """Sparse skewed block of size ``n - uniform_size`` next to a uniform block."""
    window = sparse_kwargs.get("window", DEFAULT_WINDOW)
    noise = sparse_kwargs.get("noise_std", 0.003)
    blocks: list[BlockSpec] = [SingleBlockSpec(n=n - uniform_size, **sparse_kwargs)]
    if uniform_size:
        blocks.append(UniformBlockSpec(uniform_size, noise_std=noise, window=window))
    return MultiBlockSpec(n, tuple(blocks))


def flow_variation_spec(
    sigma: float,
    rng=None,
    n_blocks: int = 8,
    block_size: int = 25,
    base_flows: int = 10,
    noise_std: float = 0.003,
    window: int = DEFAULT_WINDOW,
) -> MultiBlockSpec:
    """Blocks with ``base_flows + floor(sigma * (U - 0.5))`` equal-valued flows each."""
    rng = _rng(rng)
    blocks = []
    for _ in range(n_blocks):
        count = base_flows + math.floor(sigma * (rng.uniform() - 0.5))
        count = min(max(count, 0), block_size)
        blocks.append(
            SingleBlockSpec(
                n=block_size, n_large=count, n_small=0, c_large=1.0, c_small=0.0,
                noise_std=noise_std, window=window,
            )
        )
    return MultiBlockSpec(n_blocks * block_size, tuple(blocks))


def generate(spec, rng=None) -> np.ndarray:
    """Demand matrix for any block description."""
    if isinstance(spec, MultiBlockSpec):
        return gen_multi_block(spec, rng)
    return _gen_block(spec, _rng(rng))
