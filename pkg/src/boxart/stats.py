"""Exact binomial intervals, stratified accuracy and rounding for reports."""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

from .errors import EmptyGroup, InvalidArgs

TOL = 1e-9


def _log_pmf(n: int, i: int, p: float) -> float:
    return (math.lgamma(n + 1) - math.lgamma(i + 1) - math.lgamma(n - i + 1)
            + i * math.log(p) + (n - i) * math.log1p(-p))


def binom_cdf(k: int, n: int, p: float) -> float:
    """P(X <= k) for X ~ Binomial(n, p)."""
    if k < 0:
        return 0.0
    if k >= n:
        return 1.0
    if p <= 0.0:
        return 1.0
    if p >= 1.0:
        return 0.0
    return min(1.0, math.fsum(math.exp(_log_pmf(n, i, p)) for i in range(k + 1)))


def binomial_tail_ge(n: int, p: float, k: int) -> float:
    """P(X >= k) for X ~ Binomial(n, p), summing the terms directly."""
    if not 0 <= k <= n + 1 or not 0.0 <= p <= 1.0:
        raise InvalidArgs(f"need 0 <= k <= n+1 and p in [0, 1], got n={n} p={p} k={k}")
    if k == 0:
        return 1.0
    if k > n:
        return 0.0
    if p in (0.0, 1.0):
        return float(p == 1.0)
    return min(1.0, math.fsum(math.exp(_log_pmf(n, i, p)) for i in range(k, n + 1)))


def _bisect(f, target: float, increasing: bool) -> float:
    lo, hi = 0.0, 1.0
    while hi - lo > TOL:
        mid = (lo + hi) / 2
        if (f(mid) < target) == increasing:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def clopper_pearson(k: int, n: int, alpha: float = 0.05) -> tuple[float, float]:
    """Exact equal-tailed binomial interval, by bisection on the binomial CDF."""
    if not (isinstance(k, int) and isinstance(n, int)) or n < 1 or not 0 <= k <= n or not 0 < alpha < 1:
        raise InvalidArgs(f"need integers 0 <= k <= n, n >= 1 and 0 < alpha < 1; got k={k} n={n} alpha={alpha}")
    half = alpha / 2
    # P(X >= k) grows with p; P(X <= k) shrinks with p
    lo = 0.0 if k == 0 else _bisect(lambda p: binomial_tail_ge(n, p, k), half, increasing=True)
    hi = 1.0 if k == n else _bisect(lambda p: binom_cdf(k, n, p), half, increasing=False)
    return lo, hi


@dataclass(frozen=True)
class PartResult:
    part: str
    k: int
    n: int

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.k <= self.n:
            raise InvalidArgs(f"part {self.part}: need 0 <= k <= n and n >= 1, got {self.k}/{self.n}")


@dataclass(frozen=True)
class PartAccuracyGroup:
    image_id: str
    parts: tuple[PartResult, ...]

    @property
    def total_n(self) -> int:
        return sum(p.n for p in self.parts)


def stratified_accuracy(group: PartAccuracyGroup | Sequence[PartResult]) -> float:
    """Unweighted mean of the per-part accuracies."""
    parts = group.parts if isinstance(group, PartAccuracyGroup) else tuple(group)
    if not parts:
        raise EmptyGroup("stratified accuracy needs at least one part")
    return math.fsum(p.k / p.n for p in parts) / len(parts)


def pct(x: float, places: int = 1) -> Decimal:
    """Percentage rounded half-up, e.g. 0.74748 -> Decimal('74.7')."""
    q = Decimal(1).scaleb(-places)
    return (Decimal(repr(x)) * 100).quantize(q, rounding=ROUND_HALF_UP)
