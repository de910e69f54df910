"""Instance and solution files.

A file is any number of ``#`` comment lines followed by one JSON object.
The writer puts each top-level key on its own line with a compact value,
so files diff well and are byte-stable.  Readers reject unknown keys,
missing keys, and non-integer numbers.  The full grammar is in README.md.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import FormatError, InstanceError
from .model import Infeasible, Instance, Solution, TypeInstance, VectorInstance
from .objectives import (
    Abs,
    Composite,
    CompletelySeparable,
    General,
    Linear,
    MatrixTable,
    MaxColumnL1,
    ProductColumns,
    Quadratic,
    ScaledQuadratic,
    Separable,
    Table,
    VectorTable,
    as_matrix,
)
from .shapes import Free, Interval, Sets, Single

INSTANCE_FORMAT = "vecpart-instance/1"
SOLUTION_FORMAT = "vecpart-solution/1"


# --------------------------------------------------------------------------
# field helpers


def _fields(obj: Any, where: str, required: Sequence[str], optional: Sequence[str] = ()) -> Dict:
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected an object")
    unknown = sorted(set(obj) - set(required) - set(optional))
    if unknown:
        raise FormatError(f"{where}: unknown field(s) {', '.join(unknown)}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise FormatError(f"{where}: missing field(s) {', '.join(missing)}")
    return obj


def _int(v: Any, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise FormatError(f"{where}: expected an integer, got {v!r}")
    return v


def _ints(v: Any, where: str) -> Tuple[int, ...]:
    if not isinstance(v, list):
        raise FormatError(f"{where}: expected a list of integers")
    return tuple(_int(x, where) for x in v)


def _matrix(v: Any, where: str) -> Tuple[Tuple[int, ...], ...]:
    if not isinstance(v, list):
        raise FormatError(f"{where}: expected a list of rows")
    return tuple(_ints(row, where) for row in v)


def _opt_ints(v: Any, where: str) -> Optional[Tuple[int, ...]]:
    return None if v is None else _ints(v, where)


def _opt_int(v: Any, where: str) -> Optional[int]:
    return None if v is None else _int(v, where)


# --------------------------------------------------------------------------
# shapes


def shape_from_dict(obj: Any):
    if not isinstance(obj, dict) or "type" not in obj:
        raise FormatError("shape: expected an object with a type field")
    kind = obj["type"]
    if kind == "free":
        _fields(obj, "shape", ["type"])
        return Free()
    if kind == "interval":
        _fields(obj, "shape", ["type", "l", "u"])
        return Interval(_ints(obj["l"], "shape.l"), _ints(obj["u"], "shape.u"))
    if kind == "single":
        _fields(obj, "shape", ["type", "sizes"])
        return Single(_ints(obj["sizes"], "shape.sizes"))
    if kind == "sets":
        _fields(obj, "shape", ["type", "B"])
        return Sets(_matrix(obj["B"], "shape.B"))
    raise FormatError(f"shape: unknown type {kind!r}")


def shape_to_dict(shape) -> Dict:
    if isinstance(shape, Free):
        return {"type": "free"}
    if isinstance(shape, Interval):
        return {"type": "interval", "l": list(shape.l), "u": list(shape.u)}
    if isinstance(shape, Single):
        return {"type": "single", "sizes": list(shape.sizes)}
    if isinstance(shape, Sets):
        return {"type": "sets", "B": [list(b) for b in shape.B]}
    raise FormatError(f"cannot serialize shape {shape!r}")


# --------------------------------------------------------------------------
# objectives


def univariate_from_dict(obj: Any, where: str = "term"):
    if not isinstance(obj, dict) or "family" not in obj:
        raise FormatError(f"{where}: expected an object with a family field")
    fam = obj["family"]
    if fam == "quadratic":
        _fields(obj, where, ["family", "b"])
        return Quadratic(_int(obj["b"], where))
    if fam == "scaled_quadratic":
        _fields(obj, where, ["family", "c", "b"])
        return ScaledQuadratic(_int(obj["c"], where), _int(obj["b"], where))
    if fam == "linear":
        _fields(obj, where, ["family", "c"])
        return Linear(_int(obj["c"], where))
    if fam == "abs":
        _fields(obj, where, ["family", "b"])
        return Abs(_int(obj["b"], where))
    if fam == "table":
        _fields(obj, where, ["family", "domain_min", "values"])
        try:
            return Table(_int(obj["domain_min"], where), _ints(obj["values"], where))
        except InstanceError as exc:
            raise FormatError(f"{where}: {exc}") from None
    raise FormatError(f"{where}: unknown family {fam!r}")


def univariate_to_dict(f) -> Dict:
    if isinstance(f, Quadratic):
        return {"family": "quadratic", "b": f.b}
    if isinstance(f, ScaledQuadratic):
        return {"family": "scaled_quadratic", "c": f.c, "b": f.b}
    if isinstance(f, Linear):
        return {"family": "linear", "c": f.c}
    if isinstance(f, Abs):
        return {"family": "abs", "b": f.b}
    if isinstance(f, Table):
        return {"family": "table", "domain_min": f.domain_min, "values": list(f.values)}
    raise FormatError(f"cannot serialize univariate function {f!r}")


def _part_from_dict(obj: Any, where: str):
    if not isinstance(obj, dict) or "type" not in obj:
        raise FormatError(f"{where}: expected an object with a type field")
    if obj["type"] == "composite":
        _fields(obj, where, ["type", "weights", "outer"])
        return Composite(_ints(obj["weights"], where), univariate_from_dict(obj["outer"], where))
    if obj["type"] == "table":
        _fields(obj, where, ["type", "entries"], ["default"])
        raw = obj["entries"]
        if not isinstance(raw, list):
            raise FormatError(f"{where}: entries must be a list of [vector, value] pairs")
        entries = []
        for e in raw:
            if not isinstance(e, list) or len(e) != 2:
                raise FormatError(f"{where}: entries must be a list of [vector, value] pairs")
            entries.append((_ints(e[0], where), _int(e[1], where)))
        return VectorTable(tuple(entries), _opt_int(obj.get("default"), where))
    raise FormatError(f"{where}: unknown part type {obj['type']!r}")


def _part_to_dict(f) -> Dict:
    if isinstance(f, Composite):
        return {"type": "composite", "weights": list(f.weights), "outer": univariate_to_dict(f.outer)}
    if isinstance(f, VectorTable):
        out = {"type": "table", "entries": [[list(k), v] for k, v in f.entries]}
        if f.default is not None:
            out["default"] = f.default
        return out
    raise FormatError(f"cannot serialize separable part {f!r}")


def objective_from_dict(obj: Any):
    if not isinstance(obj, dict) or "class" not in obj:
        raise FormatError("objective: expected an object with a class field")
    cls = obj["class"]
    if cls == "general":
        _fields(obj, "objective", ["class", "builtin"], ["weights", "entries", "default"])
        name = obj["builtin"]
        if name in ("product_columns", "max_column_l1"):
            _fields(obj, "objective", ["class", "builtin"], ["weights"])
            builtin = ProductColumns if name == "product_columns" else MaxColumnL1
            return General(builtin(_opt_ints(obj.get("weights"), "objective.weights")))
        if name == "table":
            _fields(obj, "objective", ["class", "builtin", "entries"], ["default"])
            raw = obj["entries"]
            if not isinstance(raw, list):
                raise FormatError("objective: entries must be a list of [matrix, value] pairs")
            entries = []
            for e in raw:
                if not isinstance(e, list) or len(e) != 2:
                    raise FormatError("objective: entries must be a list of [matrix, value] pairs")
                entries.append((_matrix(e[0], "objective.entries"), _int(e[1], "objective.entries")))
            return General(MatrixTable(tuple(entries), _opt_int(obj.get("default"), "objective")))
        raise FormatError(
            f"objective: unknown general builtin {name!r} "
            "(allowed: table, product_columns, max_column_l1)"
        )
    if cls == "separable":
        _fields(obj, "objective", ["class", "parts"])
        if not isinstance(obj["parts"], list):
            raise FormatError("objective.parts: expected a list")
        return Separable(
            tuple(_part_from_dict(f, f"objective.parts[{k}]") for k, f in enumerate(obj["parts"]))
        )
    if cls == "completely_separable":
        _fields(obj, "objective", ["class", "terms"])
        terms = obj["terms"]
        if not isinstance(terms, list) or not all(isinstance(r, list) for r in terms):
            raise FormatError("objective.terms: expected a list of p lists")
        return CompletelySeparable(
            tuple(
                tuple(univariate_from_dict(f, f"objective.terms[{k}][{i}]") for i, f in enumerate(row))
                for k, row in enumerate(terms)
            )
        )
    raise FormatError(f"objective: unknown class {cls!r}")


def objective_to_dict(objective) -> Dict:
    if isinstance(objective, General):
        f = objective.func
        if isinstance(f, (ProductColumns, MaxColumnL1)):
            out = {"class": "general", "builtin": "product_columns" if isinstance(f, ProductColumns) else "max_column_l1"}
            if f.weights is not None:
                out["weights"] = list(f.weights)
            return out
        if isinstance(f, MatrixTable):
            out = {
                "class": "general",
                "builtin": "table",
                "entries": [[[list(r) for r in m], v] for m, v in f.entries],
            }
            if f.default is not None:
                out["default"] = f.default
            return out
        raise FormatError("general objectives serialize only as table, product_columns or max_column_l1")
    if isinstance(objective, Separable):
        return {"class": "separable", "parts": [_part_to_dict(f) for f in objective.parts]}
    if isinstance(objective, CompletelySeparable):
        return {
            "class": "completely_separable",
            "terms": [[univariate_to_dict(f) for f in row] for row in objective.terms],
        }
    raise FormatError(f"cannot serialize objective {objective!r}")


# --------------------------------------------------------------------------
# instances


def instance_from_dict(obj: Any) -> Instance:
    if not isinstance(obj, Mapping):
        raise FormatError("instance: expected an object")
    obj = dict(obj)
    fmt = obj.get("format", INSTANCE_FORMAT)
    if fmt != INSTANCE_FORMAT:
        raise FormatError(f"instance: unsupported format {fmt!r}")
    kind = obj.get("kind")
    if kind == "vector":
        _fields(obj, "instance", ["kind", "p", "A", "shape", "objective"], ["format", "n", "d"])
        A = _matrix(obj["A"], "A")
        for key, actual in (("d", len(A)), ("n", len(A[0]) if A else 0)):
            if key in obj and _int(obj[key], key) != actual:
                raise InstanceError(f"dimension mismatch: {key}={obj[key]} but A gives {actual}")
        return VectorInstance(A, _int(obj["p"], "p"), shape_from_dict(obj["shape"]), objective_from_dict(obj["objective"]))
    if kind == "type":
        _fields(obj, "instance", ["kind", "p", "counts", "shape", "objective"], ["format", "t", "n"])
        counts = _ints(obj["counts"], "counts")
        for key, actual in (("t", len(counts)), ("n", sum(counts))):
            if key in obj and _int(obj[key], key) != actual:
                raise InstanceError(f"dimension mismatch: {key}={obj[key]} but counts give {actual}")
        return TypeInstance(counts, _int(obj["p"], "p"), shape_from_dict(obj["shape"]), objective_from_dict(obj["objective"]))
    raise FormatError(f"instance: kind must be 'vector' or 'type', got {kind!r}")


def instance_to_dict(instance: Instance) -> Dict:
    out: Dict[str, Any] = {"format": INSTANCE_FORMAT, "kind": instance.kind}
    if instance.kind == "vector":
        out.update(n=instance.n, d=instance.d, p=instance.p, A=[list(r) for r in instance.A])
    else:
        out.update(t=instance.t, n=instance.n, p=instance.p, counts=list(instance.counts))
    out["shape"] = shape_to_dict(instance.shape)
    out["objective"] = objective_to_dict(instance.objective)
    return out


# --------------------------------------------------------------------------
# documents


def _dump(obj: Dict, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" if c else "#" for c in comments]
    lines.append("{")
    items = list(obj.items())
    for idx, (k, v) in enumerate(items):
        sep = "," if idx < len(items) - 1 else ""
        lines.append(f"  {json.dumps(k)}: {json.dumps(v, separators=(',', ':'))}{sep}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _load(text: str) -> Tuple[Any, List[str]]:
    comments, body = [], []
    for line in text.splitlines():
        if not body and line.lstrip().startswith("#"):
            comments.append(line.lstrip()[1:].strip())
        else:
            body.append(line)
    try:
        return json.loads("\n".join(body)), comments
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed document: {exc}") from None


def serialize_instance(instance: Instance, comments: Sequence[str] = ()) -> str:
    return _dump(instance_to_dict(instance), comments)


def parse_instance(text: str) -> Instance:
    obj, _ = _load(text)
    return instance_from_dict(obj)


def read_comments(text: str) -> List[str]:
    return _load(text)[1]


def read_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def write_instance(path, instance: Instance, comments: Sequence[str] = ()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_instance(instance, comments))


# --------------------------------------------------------------------------
# solutions

@dataclass(frozen=True)
class SolveError:
    """A solve that stopped with an error (ineligible solver, budget, bad input)."""

    reason: str
    solver: str = ""
    stats: Dict[str, Any] = field(default_factory=dict, compare=False)
    status = "error"
    feasible = False
    value = None


_SOLUTION_KEYS = ["format", "solver", "status", "value", "assignment", "counts", "sums", "wall_time", "stats", "reason"]


def solution_to_dict(result, wall_time: Optional[float] = None) -> Dict:
    out: Dict[str, Any] = {"format": SOLUTION_FORMAT, "solver": result.solver, "status": result.status}
    if result.status == "optimal":
        out["value"] = result.value
        out["assignment"] = list(result.assignment)
        out["counts"] = None if result.counts is None else [list(r) for r in result.counts]
        out["sums"] = [list(r) for r in result.sums]
    else:
        out["value"] = None
        out["reason"] = getattr(result, "reason", "")
    out["wall_time"] = None if wall_time is None else round(wall_time, 6)
    out["stats"] = {k: result.stats[k] for k in sorted(result.stats)}
    return out


def serialize_solution(result, wall_time: Optional[float] = None) -> str:
    return _dump(solution_to_dict(result, wall_time))


def solution_from_dict(obj: Any):
    """Inverse of :func:`solution_to_dict`; returns ``(result, wall_time)``."""
    _fields(obj, "solution", ["format", "solver", "status"], _SOLUTION_KEYS)
    if obj["format"] != SOLUTION_FORMAT:
        raise FormatError(f"solution: unsupported format {obj['format']!r}")
    stats = obj.get("stats") or {}
    if not isinstance(stats, dict):
        raise FormatError("solution.stats: expected an object")
    wall = obj.get("wall_time")
    if wall is not None and not isinstance(wall, (int, float)):
        raise FormatError("solution.wall_time: expected a number")
    status = obj["status"]
    if status == "optimal":
        _fields(obj, "solution", ["format", "solver", "status", "value", "assignment", "sums"], _SOLUTION_KEYS)
        counts = obj.get("counts")
        result = Solution(
            value=_int(obj["value"], "value"),
            assignment=_ints(obj["assignment"], "assignment"),
            sums=as_matrix(_matrix(obj["sums"], "sums")),
            counts=None if counts is None else as_matrix(_matrix(counts, "counts")),
            solver=obj["solver"],
            stats=stats,
        )
    elif status == "infeasible":
        result = Infeasible(obj.get("reason", ""), solver=obj["solver"], stats=stats)
    elif status == "error":
        result = SolveError(obj.get("reason", ""), solver=obj["solver"], stats=stats)
    else:
        raise FormatError(f"solution: unknown status {status!r}")
    return result, wall


def parse_solution(text: str):
    obj, _ = _load(text)
    return solution_from_dict(obj)
