"""Shape constraints: which part sizes ``|pi_k|`` are admissible."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .errors import InstanceError


@dataclass(frozen=True)
class Free:
    """Every size in ``0..n`` is admissible."""

    def check(self, p: int, n: int) -> None:
        pass

    def contains(self, k: int, size: int, n: int) -> bool:
        return 0 <= size <= n

    def contains_array(self, k: int, sizes: np.ndarray, n: int) -> np.ndarray:
        return (sizes >= 0) & (sizes <= n)

    def window(self, k: int, n: int) -> Tuple[int, int]:
        return 0, n

    def interval_bounds(self, p: int, n: int) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
        return (0,) * p, (n,) * p


@dataclass(frozen=True)
class Interval:
    """``l_k <= |pi_k| <= u_k``."""

    l: Tuple[int, ...]
    u: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "l", tuple(int(v) for v in self.l))
        object.__setattr__(self, "u", tuple(int(v) for v in self.u))

    def check(self, p: int, n: int) -> None:
        if len(self.l) != p or len(self.u) != p:
            raise InstanceError(f"interval bounds must have length p={p}")
        for k, (lo, hi) in enumerate(zip(self.l, self.u)):
            if lo > hi:
                raise InstanceError(f"empty interval at k={k + 1}")
            if lo < 0 or hi > n:
                raise InstanceError(f"interval at k={k + 1} not within [0, {n}]")

    def contains(self, k: int, size: int, n: int) -> bool:
        return self.l[k] <= size <= self.u[k]

    def contains_array(self, k: int, sizes: np.ndarray, n: int) -> np.ndarray:
        return (sizes >= self.l[k]) & (sizes <= self.u[k])

    def window(self, k: int, n: int) -> Tuple[int, int]:
        return self.l[k], self.u[k]

    def interval_bounds(self, p: int, n: int):
        return self.l, self.u


@dataclass(frozen=True)
class Single:
    """``|pi_k| = sizes_k``; the sizes need not sum to ``n`` (then infeasible)."""

    sizes: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(v) for v in self.sizes))

    def check(self, p: int, n: int) -> None:
        if len(self.sizes) != p:
            raise InstanceError(f"single shape must list p={p} sizes")
        if any(s < 0 for s in self.sizes):
            raise InstanceError("single shape sizes must be nonnegative")

    def contains(self, k: int, size: int, n: int) -> bool:
        return size == self.sizes[k]

    def contains_array(self, k: int, sizes: np.ndarray, n: int) -> np.ndarray:
        return sizes == self.sizes[k]

    def window(self, k: int, n: int) -> Tuple[int, int]:
        return self.sizes[k], self.sizes[k]

    def interval_bounds(self, p: int, n: int):
        return self.sizes, self.sizes


@dataclass(frozen=True)
class Sets:
    """Explicit admissible size sets ``B_k``, kept sorted.

    An empty ``B_k`` is allowed and makes the instance infeasible.
    """

    B: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "B", tuple(tuple(sorted(set(int(v) for v in b))) for b in self.B))

    def check(self, p: int, n: int) -> None:
        if len(self.B) != p:
            raise InstanceError(f"sets shape must list p={p} sets")
        for k, b in enumerate(self.B):
            if b and (b[0] < 0 or b[-1] > n):
                raise InstanceError(f"set B_{k + 1} not within [0, {n}]")

    def contains(self, k: int, size: int, n: int) -> bool:
        b = self.B[k]
        i = bisect.bisect_left(b, size)
        return i < len(b) and b[i] == size

    def contains_array(self, k: int, sizes: np.ndarray, n: int) -> np.ndarray:
        return np.isin(sizes, np.asarray(self.B[k], dtype=np.int64))

    def window(self, k: int, n: int) -> Tuple[int, int]:
        b = self.B[k]
        return (b[0], b[-1]) if b else (1, 0)

    def interval_bounds(self, p: int, n: int):
        return None


Shape = Union[Free, Interval, Single, Sets]
