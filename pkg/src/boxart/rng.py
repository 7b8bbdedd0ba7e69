"""Deterministic counter-based random stream (SplitMix64).

Output ``i`` of a stream seeded with ``s`` is ``mix64(s + i * GOLDEN)``, so a
stream is fully described by its seed and a counter. Draws are produced in
numpy blocks for speed; ``mix64`` is the scalar reference used by the tests.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from typing import MutableSequence, Sequence, TypeVar

import numpy as np

T = TypeVar("T")

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_BLOCK = 1024


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def splitmix_output(seed: int, i: int) -> int:
    """The i-th output (1-based) of the stream seeded with ``seed``."""
    return mix64((seed + i * GOLDEN) & MASK64)


def child_seed(parent_seed: int, index: int) -> int:
    return mix64((parent_seed ^ mix64(index + 0x632BE59BD9B4E019)) & MASK64)


def _block_array(seed: int, start: int, n: int) -> np.ndarray:
    idx = np.arange(start + 1, start + 1 + n, dtype=np.uint64)
    z = np.uint64(seed) + idx * np.uint64(GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def _block(seed: int, start: int, n: int) -> list[int]:
    return _block_array(seed, start, n).tolist()


_POISSON_CDF: dict[float, list[float]] = {}


def _poisson_cdf(lam: float) -> list[float]:
    cdf = _POISSON_CDF.get(lam)
    if cdf is None:
        p = math.exp(-lam)
        total = p
        cdf = [total]
        k = 0
        while total < 1.0 - 1e-15 and k < 10 * lam + 100:
            k += 1
            p *= lam / k
            total += p
            cdf.append(total)
        _POISSON_CDF[lam] = cdf
    return cdf


def truncated_poisson_inv(lam: float, lo: int, u: np.ndarray) -> np.ndarray:
    """Invert the Poisson(lam) law conditioned on k >= lo at uniforms ``u``.

    Same distribution as drawing Poisson(lam) repeatedly until the value is >= lo,
    but one uniform per sample.
    """
    cdf = _poisson_cdf_array(lam)
    base = cdf[lo - 1] if lo > 0 else 0.0
    k = np.searchsorted(cdf, base + u * (1.0 - base), side="left")
    return np.minimum(np.maximum(k, lo), len(cdf) - 1)


_POISSON_ARR: dict[float, np.ndarray] = {}


def _poisson_cdf_array(lam: float) -> np.ndarray:
    arr = _POISSON_ARR.get(lam)
    if arr is None:
        arr = np.array(_poisson_cdf(lam))
        _POISSON_ARR[lam] = arr
    return arr


class RandomStream:
    """Seeded stream of 64-bit draws with the handful of samplers the generators need."""

    def __init__(self, seed: int):
        if not 0 <= seed <= MASK64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = seed
        self.counter = 0
        self._buf: list[int] = []
        self._pos = 0

    def next_u64(self) -> int:
        if self._pos == len(self._buf):
            self._buf = _block(self.seed, self.counter, _BLOCK)
            self._pos = 0
        v = self._buf[self._pos]
        self._pos += 1
        self.counter += 1
        return v

    def jump(self, counter: int) -> None:
        """Continue the stream from ``counter`` (used after draws consumed elsewhere)."""
        self.counter = counter
        self._buf, self._pos = [], 0

    def child(self, index: int) -> "RandomStream":
        return RandomStream(child_seed(self.seed, index))

    def uniforms(self, n: int) -> np.ndarray:
        """The next ``n`` draws as floats in [0, 1), same mapping as ``random``."""
        z = _block_array(self.seed, self.counter, n)
        self.counter += n
        self._buf, self._pos = [], 0  # counter-based, so the buffer is simply refilled later
        return (z >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform_int(self, lo: int, hi: int) -> int:
        """Uniform integer in the inclusive range [lo, hi], without modulo bias."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        n = hi - lo + 1
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return lo + x % n

    def poisson(self, lam: float) -> int:
        # Inversion: smallest k with u <= F(k). The cumulative table is the
        # same running sum a sequential search would build.
        if lam <= 0:
            raise ValueError("lambda must be positive")
        return bisect_left(_poisson_cdf(lam), self.random())

    def choice(self, seq: Sequence[T]) -> T:
        return seq[self.uniform_int(0, len(seq) - 1)]

    def shuffle(self, items: MutableSequence[T]) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.uniform_int(0, i)
            items[i], items[j] = items[j], items[i]

    def sample(self, seq: Sequence[T], k: int) -> list[T]:
        pool = list(seq)
        if k > len(pool):
            raise ValueError(f"cannot sample {k} items from {len(pool)}")
        for i in range(k):
            j = self.uniform_int(i, len(pool) - 1)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]
