"""Objective oracles, grouped by separability class.

Every oracle is a pure integer function.  Matrices handed to oracles are
tuples of rows: a ``d x p`` sums matrix ``X`` has ``X[i][k]`` equal to the
``i``-th attribute sum of part ``k``.  Columns are extracted with
:func:`column`.

Univariate families (used by completely separable objectives and as the
outer function of :class:`Composite`) carry a ``bound`` method that gives
the largest absolute value on an interval; that is what the 64-bit range
check in :mod:`vecpart.model` relies on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence, Tuple, Union

from .errors import InstanceError, OracleDomainError

Matrix = Tuple[Tuple[int, ...], ...]
Vector = Tuple[int, ...]


def column(matrix: Matrix, k: int) -> Vector:
    return tuple(row[k] for row in matrix)


def as_matrix(rows) -> Matrix:
    return tuple(tuple(int(v) for v in row) for row in rows)


# --------------------------------------------------------------------------
# univariate families


@dataclass(frozen=True)
class Quadratic:
    """``(x - b)^2``."""

    b: int = 0
    convex = True

    def __call__(self, x: int) -> int:
        return (x - self.b) ** 2

    def bound(self, lo: int, hi: int) -> int:
        return max(self(lo), self(hi))


@dataclass(frozen=True)
class ScaledQuadratic:
    """``(c*x - b)^2``."""

    c: int = 1
    b: int = 0
    convex = True

    def __call__(self, x: int) -> int:
        return (self.c * x - self.b) ** 2

    def bound(self, lo: int, hi: int) -> int:
        return max(self(lo), self(hi))


@dataclass(frozen=True)
class Linear:
    """``c*x``."""

    c: int = 1
    convex = True

    def __call__(self, x: int) -> int:
        return self.c * x

    def bound(self, lo: int, hi: int) -> int:
        return max(abs(self(lo)), abs(self(hi)))


@dataclass(frozen=True)
class Abs:
    """``|x - b|``."""

    b: int = 0
    convex = True

    def __call__(self, x: int) -> int:
        return abs(x - self.b)

    def bound(self, lo: int, hi: int) -> int:
        return max(self(lo), self(hi))


@dataclass(frozen=True)
class Table:
    """Explicit values on ``domain_min, domain_min + 1, ...``.

    Evaluating outside the table raises :class:`OracleDomainError`; there
    is no extrapolation.
    """

    domain_min: int
    values: Tuple[int, ...]
    convex = None  # decided by scanning, see is_convex_on

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if not self.values:
            raise InstanceError("table must hold at least one value")

    @property
    def domain_max(self) -> int:
        return self.domain_min + len(self.values) - 1

    def covers(self, lo: int, hi: int) -> bool:
        return self.domain_min <= lo and hi <= self.domain_max

    def __call__(self, x: int) -> int:
        idx = x - self.domain_min
        if idx < 0 or idx >= len(self.values):
            raise OracleDomainError(
                f"table argument {x} outside [{self.domain_min}, {self.domain_max}]"
            )
        return self.values[idx]

    def bound(self, lo: int, hi: int) -> int:
        lo = max(lo, self.domain_min)
        hi = min(hi, self.domain_max)
        if lo > hi:
            return 0
        return max(abs(v) for v in self.values[lo - self.domain_min : hi - self.domain_min + 1])


Univariate = Union[Quadratic, ScaledQuadratic, Linear, Abs, Table]
UNIVARIATE_TYPES = (Quadratic, ScaledQuadratic, Linear, Abs, Table)


def is_convex_on(func: Callable[[int], int], lo: int, hi: int) -> Tuple[bool, Optional[int]]:
    """Scan second differences of ``func`` on ``[lo, hi]``.

    Returns ``(True, None)`` or ``(False, x)`` for the first interior ``x``
    with ``func(x-1) + func(x+1) < 2 func(x)``.
    """
    if getattr(func, "convex", None) is True:
        return True, None
    if hi - lo < 2:
        return True, None
    prev, cur = func(lo), func(lo + 1)
    for x in range(lo + 1, hi):
        nxt = func(x + 1)
        if prev + nxt < 2 * cur:
            return False, x
        prev, cur = cur, nxt
    return True, None


# --------------------------------------------------------------------------
# per-part functions over d-vectors (separable objectives)


@dataclass(frozen=True)
class Composite:
    """``outer(w . x)`` for a fixed weight vector ``w``."""

    weights: Tuple[int, ...]
    outer: Univariate

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))

    def __call__(self, x: Sequence[int]) -> int:
        return self.outer(sum(w * v for w, v in zip(self.weights, x)))

    def inner_range(self, lo: int, hi: int) -> Tuple[int, int]:
        return (
            sum(min(w * lo, w * hi) for w in self.weights),
            sum(max(w * lo, w * hi) for w in self.weights),
        )

    def bound(self, lo: int, hi: int) -> int:
        return self.outer.bound(*self.inner_range(lo, hi))


@dataclass(frozen=True)
class VectorTable:
    """Explicit values keyed by d-vectors, with an optional fallback."""

    entries: Tuple[Tuple[Vector, int], ...]
    default: Optional[int] = None
    _lookup: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        items = self.entries.items() if isinstance(self.entries, Mapping) else self.entries
        entries = tuple(sorted((tuple(int(v) for v in key), int(val)) for key, val in items))
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_lookup", dict(entries))

    def __call__(self, x: Sequence[int]) -> int:
        key = tuple(x)
        try:
            return self._lookup[key]
        except KeyError:
            if self.default is None:
                raise OracleDomainError(f"vector table has no entry for {key}") from None
            return self.default

    def bound(self, lo: int, hi: int) -> int:
        vals = [abs(v) for _, v in self.entries]
        if self.default is not None:
            vals.append(abs(self.default))
        return max(vals, default=0)


# --------------------------------------------------------------------------
# general (non-separable) built-ins over d x p matrices


def _ones_or(weights, d):
    return tuple(weights) if weights is not None else (1,) * d


@dataclass(frozen=True)
class ProductColumns:
    """Product over parts of ``w . x^k`` (``w`` defaults to all ones)."""

    weights: Optional[Tuple[int, ...]] = None

    def __call__(self, m: Matrix) -> int:
        d, p = len(m), len(m[0]) if m else 0
        w = _ones_or(self.weights, d)
        out = 1
        for k in range(p):
            out *= sum(w[i] * m[i][k] for i in range(d))
        return out

    def bound(self, lo: int, hi: int, d: int, p: int) -> int:
        w = _ones_or(self.weights, d)
        per = sum(abs(x) for x in w) * max(abs(lo), abs(hi))
        return per**p


@dataclass(frozen=True)
class MaxColumnL1:
    """Largest weighted l1-norm over the part columns."""

    weights: Optional[Tuple[int, ...]] = None

    def __call__(self, m: Matrix) -> int:
        d, p = len(m), len(m[0]) if m else 0
        w = _ones_or(self.weights, d)
        return max(sum(w[i] * abs(m[i][k]) for i in range(d)) for k in range(p))

    def bound(self, lo: int, hi: int, d: int, p: int) -> int:
        w = _ones_or(self.weights, d)
        return sum(abs(x) for x in w) * max(abs(lo), abs(hi))


@dataclass(frozen=True)
class MatrixTable:
    """Explicit values keyed by whole sums matrices, with optional fallback."""

    entries: Tuple[Tuple[Matrix, int], ...]
    default: Optional[int] = None
    _lookup: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        items = self.entries.items() if isinstance(self.entries, Mapping) else self.entries
        entries = tuple(sorted((as_matrix(key), int(val)) for key, val in items))
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_lookup", dict(entries))

    def __call__(self, m: Matrix) -> int:
        try:
            return self._lookup[m]
        except KeyError:
            if self.default is None:
                raise OracleDomainError(f"matrix table has no entry for {m}") from None
            return self.default

    def bound(self, lo: int, hi: int, d: int, p: int) -> int:
        vals = [abs(v) for _, v in self.entries]
        if self.default is not None:
            vals.append(abs(self.default))
        return max(vals, default=0)


# --------------------------------------------------------------------------
# objective classes


@dataclass(frozen=True)
class General:
    """Arbitrary oracle ``f(X)`` over the whole sums matrix."""

    func: Callable[[Matrix], int]

    def evaluate(self, sums: Matrix) -> int:
        return self.func(sums)

    def check_dims(self, d: int, p: int) -> None:
        w = getattr(self.func, "weights", None)
        if w is not None and len(w) != d:
            raise InstanceError(f"weight vector has length {len(w)}, expected {d}")
        for key, _ in getattr(self.func, "entries", ()):
            if len(key) != d or any(len(r) != p for r in key):
                raise InstanceError(f"table entry {key} is not a {d}x{p} matrix")

    def check_coverage(self, lo: int, hi: int) -> None:
        pass

    def magnitude_bound(self, lo: int, hi: int, d: int, p: int) -> Optional[int]:
        bound = getattr(self.func, "bound", None)
        return bound(lo, hi, d, p) if bound is not None else None


@dataclass(frozen=True)
class Separable:
    """``f(X) = sum_k f_k(x^k)`` with one oracle per part over d-vectors."""

    parts: Tuple[Callable[[Vector], int], ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))

    def part(self, k: int) -> Callable[[Vector], int]:
        return self.parts[k]

    def evaluate(self, sums: Matrix) -> int:
        return sum(f(column(sums, k)) for k, f in enumerate(self.parts))

    def check_dims(self, d: int, p: int) -> None:
        if len(self.parts) != p:
            raise InstanceError(f"separable objective has {len(self.parts)} parts, expected {p}")
        for k, f in enumerate(self.parts):
            w = getattr(f, "weights", None)
            if w is not None and len(w) != d:
                raise InstanceError(f"part {k + 1}: weight vector has length {len(w)}, expected {d}")
            for key, _ in getattr(f, "entries", ()):
                if len(key) != d:
                    raise InstanceError(f"part {k + 1}: table key {key} is not a {d}-vector")

    def check_coverage(self, lo: int, hi: int) -> None:
        for k, f in enumerate(self.parts):
            if isinstance(f, Composite) and isinstance(f.outer, Table):
                a, b = f.inner_range(lo, hi)
                if not f.outer.covers(a, b):
                    raise InstanceError(
                        f"table does not cover reachable domain [{a}, {b}] (part {k + 1})"
                    )

    def magnitude_bound(self, lo: int, hi: int, d: int, p: int) -> Optional[int]:
        total = 0
        for f in self.parts:
            bound = getattr(f, "bound", None)
            if bound is None:
                return None
            total += bound(lo, hi)
        return total


@dataclass(frozen=True)
class CompletelySeparable:
    """``f(X) = sum_{k,i} f_{k,i}(X[i][k])``; ``terms[k][i]`` is ``f_{k,i}``."""

    terms: Tuple[Tuple[Univariate, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(tuple(row) for row in self.terms))

    def part(self, k: int) -> Callable[[Vector], int]:
        row = self.terms[k]
        return lambda x: sum(f(v) for f, v in zip(row, x))

    def evaluate(self, sums: Matrix) -> int:
        return sum(
            f(sums[i][k]) for k, row in enumerate(self.terms) for i, f in enumerate(row)
        )

    def check_dims(self, d: int, p: int) -> None:
        if len(self.terms) != p or any(len(row) != d for row in self.terms):
            raise InstanceError(f"completely separable objective must be {p} parts x {d} terms")

    def check_coverage(self, lo: int, hi: int) -> None:
        for k, row in enumerate(self.terms):
            for i, f in enumerate(row):
                if isinstance(f, Table) and not f.covers(lo, hi):
                    raise InstanceError(
                        f"table does not cover reachable domain [{lo}, {hi}] "
                        f"(part {k + 1}, coordinate {i + 1})"
                    )

    def magnitude_bound(self, lo: int, hi: int, d: int, p: int) -> Optional[int]:
        return sum(f.bound(lo, hi) for row in self.terms for f in row)

    @property
    def all_convex_by_construction(self) -> bool:
        return all(getattr(f, "convex", None) is True for row in self.terms for f in row)


Objective = Union[General, Separable, CompletelySeparable]
