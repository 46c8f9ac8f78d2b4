"""Dyadic indicator decomposition of a vector and the discretized sets U_k.

A vector x in the unit ball is peeled into signed indicator layers: level
j > 0 holds the coordinates whose remaining positive mass still exceeds
2^-j, each contributing 2^-j; level -j mirrors this on the negative part.
Thresholds are strict, so a coordinate equal to 2^-j waits for level j + 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, List, Sequence

import numpy as np

from .errors import InvalidArgument, ResourceLimitError

MAX_ENUMERATION = 10**7


@dataclass(frozen=True, eq=False)
class IndicatorComponent:
    level: int
    support: np.ndarray

    @property
    def value(self) -> float:
        """Coordinate value on the support: sign(level) * 2^-|level|."""
        return math.copysign(2.0 ** -abs(self.level), self.level)

    @property
    def norm(self) -> float:
        return 2.0 ** -abs(self.level) * math.sqrt(self.support.size)

    def vector(self, n: int) -> np.ndarray:
        out = np.zeros(n)
        out[self.support] = self.value
        return out


@dataclass(frozen=True, eq=False)
class DiscretizedVector:
    """Unit vector sign * |S|^-1/2 * indicator(S)."""

    sign: int
    support: tuple

    def vector(self, n: int) -> np.ndarray:
        out = np.zeros(n)
        out[list(self.support)] = self.sign / math.sqrt(len(self.support))
        return out


def default_depth(n: int, r: int) -> int:
    """ceil(r * log2 n), at least 1."""
    return max(1, math.ceil(r * math.log2(n))) if n > 1 else 1


def decompose(x, N: int) -> List[IndicatorComponent]:
    """Indicator components for levels -N..-1 and 1..N, empty levels omitted.

    Returned in ascending level order.
    """
    x = np.asarray(x, dtype=np.float64)
    if N < 1:
        raise InvalidArgument("depth N must be >= 1")
    if np.linalg.norm(x) > 1.0 + 1e-12:
        raise InvalidArgument("decompose expects a vector in the unit ball")

    positive = _peel(np.where(x > 0, x, 0.0), N)
    negative = _peel(np.where(x < 0, -x, 0.0), N)
    out = [IndicatorComponent(-j, s) for j, s in reversed(negative)]
    out += [IndicatorComponent(j, s) for j, s in positive]
    return out


def _peel(mass: np.ndarray, N: int):
    residual = mass.copy()
    levels = []
    for j in range(1, N + 1):
        step = 2.0**-j
        hit = np.flatnonzero(residual > step)
        if hit.size:
            residual[hit] -= step
            levels.append((j, hit.astype(np.int64)))
    return levels


def reconstruct(components: Sequence[IndicatorComponent], n: int) -> np.ndarray:
    out = np.zeros(n)
    for c in components:
        out[c.support] += c.value
    return out


def count_U(n: int, k: int) -> int:
    return 2 * math.comb(n, k)


def enumerate_U(n: int, k: int, *, guard: int = MAX_ENUMERATION) -> Iterator[DiscretizedVector]:
    """Every member of U_k: supports in lexicographic order, +1 before -1."""
    if not 1 <= k <= n:
        raise InvalidArgument(f"support size k={k} outside [1, {n}]")
    total = count_U(n, k)
    if total > guard:
        raise ResourceLimitError(f"U_k has {total} members, guard is {guard}")
    return _iter_U(n, k)


def _iter_U(n, k):
    for support in combinations(range(n), k):
        yield DiscretizedVector(1, support)
        yield DiscretizedVector(-1, support)
