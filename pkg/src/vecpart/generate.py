"""Seeded random instances for tests, benchmarks and ``vecpart gen random``.

Everything is drawn from one ``random.Random(seed)``, so a seed fixes the
instance.  Shapes are built around a random size composition of ``n``,
which keeps them feasible; pass ``feasible=False`` to draw windows
independently.
"""

from __future__ import annotations

import random
from typing import Optional, Sequence

from .errors import InstanceError
from .model import Instance, TypeInstance, VectorInstance
from .objectives import (
    Abs,
    Composite,
    CompletelySeparable,
    General,
    Linear,
    MaxColumnL1,
    ProductColumns,
    Quadratic,
    ScaledQuadratic,
    Separable,
    Table,
)
from .shapes import Free, Interval, Sets, Single

SHAPES = ("free", "interval", "single", "sets")
GENERAL_FAMILIES = ("product_columns", "max_column_l1")
SEPARABLE_FAMILIES = ("composite",)
UNIVARIATE_FAMILIES = ("quadratic", "scaled_quadratic", "linear", "abs", "table", "convex_table")
CONVEX_FAMILIES = ("quadratic", "scaled_quadratic", "linear", "abs", "convex_table")
OBJECTIVES = GENERAL_FAMILIES + SEPARABLE_FAMILIES + UNIVARIATE_FAMILIES + ("mixed", "mixed_convex")


def random_composition(rng: random.Random, n: int, p: int) -> list:
    sizes = [0] * p
    for _ in range(n):
        sizes[rng.randrange(p)] += 1
    return sizes


def random_shape(rng: random.Random, kind: str, n: int, p: int, feasible: bool = True):
    sizes = random_composition(rng, n, p)
    if kind == "free":
        return Free()
    if kind == "interval":
        if feasible:
            l = [rng.randint(0, s) for s in sizes]
            u = [rng.randint(s, n) for s in sizes]
        else:
            l = [rng.randint(0, n) for _ in range(p)]
            u = [rng.randint(x, n) for x in l]
        return Interval(tuple(l), tuple(u))
    if kind == "single":
        if not feasible:
            sizes = [rng.randint(0, n) for _ in range(p)]
        return Single(tuple(sizes))
    if kind == "sets":
        B = []
        for s in sizes:
            extra = {rng.randint(0, n) for _ in range(rng.randint(0, 3))}
            B.append(tuple(sorted(extra | ({s} if feasible else set()))))
        return Sets(tuple(B))
    raise InstanceError(f"unknown shape kind {kind!r} (choose from {', '.join(SHAPES)})")


def _convex_table(rng: random.Random, lo: int, hi: int, scale: int) -> Table:
    # nondecreasing increments give a convex table
    steps = sorted(rng.randint(-scale, scale) for _ in range(hi - lo))
    vals = [rng.randint(-scale, scale)]
    for s in steps:
        vals.append(vals[-1] + s)
    return Table(lo, tuple(vals))


def random_univariate(rng: random.Random, family: str, lo: int, hi: int):
    width = max(1, hi - lo)
    if family == "quadratic":
        return Quadratic(rng.randint(lo, hi))
    if family == "scaled_quadratic":
        return ScaledQuadratic(rng.randint(1, 3), rng.randint(lo, hi))
    if family == "linear":
        return Linear(rng.randint(-5, 5))
    if family == "abs":
        return Abs(rng.randint(lo, hi))
    if family == "table":
        return Table(lo, tuple(rng.randint(-10 * width, 10 * width) for _ in range(hi - lo + 1)))
    if family == "convex_table":
        return _convex_table(rng, lo, hi, 2 * width)
    raise InstanceError(f"unknown univariate family {family!r}")


def random_objective(rng: random.Random, family: str, d: int, p: int, lo: int, hi: int):
    """Objective of the given family over ``d x p`` sums in ``[lo, hi]``."""
    if family in GENERAL_FAMILIES:
        weights = tuple(rng.randint(-2, 3) for _ in range(d))
        builtin = ProductColumns if family == "product_columns" else MaxColumnL1
        return General(builtin(weights))
    if family == "composite":
        parts = []
        for _ in range(p):
            weights = tuple(rng.randint(-2, 2) for _ in range(d))
            a, b = Composite(weights, Linear(0)).inner_range(lo, hi)
            outer = random_univariate(rng, rng.choice(("quadratic", "abs", "table")), a, b)
            parts.append(Composite(weights, outer))
        return Separable(tuple(parts))
    if family in UNIVARIATE_FAMILIES or family in ("mixed", "mixed_convex"):
        pool = {"mixed": UNIVARIATE_FAMILIES, "mixed_convex": CONVEX_FAMILIES}.get(family, (family,))
        return CompletelySeparable(
            tuple(tuple(random_univariate(rng, rng.choice(pool), lo, hi) for _ in range(d)) for _ in range(p))
        )
    raise InstanceError(f"unknown objective family {family!r} (choose from {', '.join(OBJECTIVES)})")


def gen_random_instance(
    n: int,
    d: int = 1,
    p: int = 2,
    a: int = 1,
    shape: str = "free",
    objective: str = "mixed",
    seed: int = 0,
    kind: str = "vector",
    t: Optional[int] = None,
    feasible: bool = True,
) -> Instance:
    """Random vector instance (``d x n`` entries in ``[-a, a]``) or type
    instance (``t`` types with counts summing to ``n``; ``d`` is ignored)."""
    if n < 0 or p < 1 or a < 0:
        raise InstanceError("need n >= 0, p >= 1 and a >= 0")
    rng = random.Random(seed)
    if kind == "vector":
        if d < 1:
            raise InstanceError("need d >= 1")
        A = tuple(tuple(rng.randint(-a, a) for _ in range(n)) for _ in range(d))
        shp = random_shape(rng, shape, n, p, feasible)
        obj = random_objective(rng, objective, d, p, -n * a, n * a)
        return VectorInstance(A, p, shp, obj)
    if kind == "type":
        t = t if t is not None else d
        if t < 1:
            raise InstanceError("need t >= 1")
        counts = tuple(random_composition(rng, n, t))
        shp = random_shape(rng, shape, n, p, feasible)
        obj = random_objective(rng, objective, t, p, 0, n)
        return TypeInstance(counts, p, shp, obj)
    raise InstanceError(f"kind must be 'vector' or 'type', got {kind!r}")


def weights_from_text(text: str) -> Sequence[int]:
    try:
        return [int(w) for w in text.replace(",", " ").split()]
    except ValueError:
        raise InstanceError(f"weights must be integers, got {text!r}") from None
