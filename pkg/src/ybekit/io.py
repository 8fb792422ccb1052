"""JSON object files: canonical serialization and schema checks.

Every file is a JSON object with a ``kind`` of brace, ring, solution,
weights, matrix or partition.  An optional ``origin`` object records how
it was produced.  Serialization sorts keys and writes floats in their
shortest round-trip form, so equal objects give identical bytes.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from ybekit.algebra import FiniteBrace, FiniteRing
from ybekit.solutions import PartitionedSet, SetSolution
from ybekit.weights import WeightSystem

KINDS = ("brace", "ring", "solution", "weights", "matrix", "partition")


class SchemaError(ValueError):
    """Malformed or inconsistent object file."""


def canonical_dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"


def _complex_list(values) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=np.complex128).reshape(-1)]


def _int_table(t) -> list[list[int]]:
    return np.asarray(t).astype(int).tolist()


def to_json(obj, origin: dict | None = None) -> dict:
    if isinstance(obj, FiniteBrace):
        out = {"kind": "brace", "order": obj.order, "add": _int_table(obj.add), "circ": _int_table(obj.circ)}
        if obj.labels is not None:
            out["labels"] = list(obj.labels)
    elif isinstance(obj, FiniteRing):
        out = {"kind": "ring", "order": obj.order, "add": _int_table(obj.add), "mul": _int_table(obj.mul)}
        if obj.labels is not None:
            out["labels"] = list(obj.labels)
    elif isinstance(obj, SetSolution):
        out = {"kind": "solution", "n": obj.n, "r": obj.r.reshape(-1, 2).tolist()}
        if obj.points is not None:
            out["points"] = list(obj.points)
    elif isinstance(obj, WeightSystem):
        out = {"kind": "weights", "n": obj.n, "d": _complex_list(obj.d)}
    elif isinstance(obj, PartitionedSet):
        out = {"kind": "partition", "n": obj.n, "classes": [list(c) for c in obj.classes]}
    elif isinstance(obj, np.ndarray):
        if obj.ndim != 2:
            raise TypeError("only 2-d arrays serialize as matrices")
        out = {"kind": "matrix", "rows": obj.shape[0], "cols": obj.shape[1], "entries": _complex_list(obj)}
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    if origin:
        out["origin"] = origin
    return out


def _need(doc: dict, key: str, typ=None):
    if key not in doc:
        raise SchemaError(f"{doc.get('kind', 'object')} file lacks {key!r}")
    v = doc[key]
    if typ is not None and not isinstance(v, typ):
        raise SchemaError(f"{key!r} has the wrong type")
    return v


def _square_table(doc, key, N):
    t = _need(doc, key, list)
    try:
        arr = np.array(t, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{key!r} is not an integer table") from exc
    if arr.shape != (N, N):
        raise SchemaError(f"{key!r} must be {N}x{N}")
    return arr


def _complex_array(doc, key, count) -> np.ndarray:
    raw = _need(doc, key, list)
    try:
        arr = np.array(raw, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{key!r} must hold [re, im] pairs") from exc
    if arr.shape != (count, 2):
        raise SchemaError(f"{key!r} must hold {count} [re, im] pairs")
    out = np.empty(count, dtype=np.complex128)
    out.real, out.imag = arr[:, 0], arr[:, 1]  # re + 1j*im would lose the sign of -0.0
    return out


def from_json(doc: Any):
    """Object for a parsed file; raises :class:`SchemaError` on malformed input."""
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    kind = doc.get("kind")
    try:
        if kind in ("brace", "ring"):
            N = _need(doc, "order", int)
            add = _square_table(doc, "add", N)
            other = _square_table(doc, "circ" if kind == "brace" else "mul", N)
            labels = doc.get("labels")
            cls = FiniteBrace if kind == "brace" else FiniteRing
            return cls(add, other, labels)
        if kind == "solution":
            n = _need(doc, "n", int)
            r = np.array(_need(doc, "r", list), dtype=np.int64)
            if r.shape != (n * n, 2):
                raise SchemaError(f"'r' must hold {n * n} pairs")
            return SetSolution(r.reshape(n, n, 2), doc.get("points"))
        if kind == "weights":
            n = _need(doc, "n", int)
            return WeightSystem(_complex_array(doc, "d", n * n).reshape(n, n))
        if kind == "matrix":
            rows, cols = _need(doc, "rows", int), _need(doc, "cols", int)
            return _complex_array(doc, "entries", rows * cols).reshape(rows, cols)
        if kind == "partition":
            n = _need(doc, "n", int)
            return PartitionedSet.of(n, _need(doc, "classes", list))
    except SchemaError:
        raise
    except (TypeError, ValueError) as exc:
        raise SchemaError(str(exc)) from exc
    raise SchemaError(f"unknown kind {kind!r}")


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return from_json(doc), doc


def load(path) -> tuple[Any, dict]:
    """``(object, raw document)`` for an object file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def dump(obj, path, origin: dict | None = None) -> str:
    text = canonical_dumps(obj if isinstance(obj, dict) else to_json(obj, origin))
    Path(path).write_text(text)
    return text


def golden_names() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files("ybekit.golden").iterdir() if p.name.endswith(".json"))


def load_golden(name: str) -> dict:
    """Raw golden document (matrices keep their rational or symbolic annotations)."""
    ref = resources.files("ybekit.golden") / f"{name}.json"
    if not ref.is_file():
        raise KeyError(name)
    return json.loads(ref.read_text())


def golden_matrix(name: str, symbols: dict[str, complex] | None = None) -> np.ndarray:
    """Matrix of a golden file; symbolic goldens need a value for each symbol."""
    doc = load_golden(name)
    if doc["kind"] == "matrix":
        return from_json(doc)
    if doc["kind"] != "symbolic_matrix":
        raise SchemaError(f"golden {name!r} is not a matrix")
    symbols = symbols or {}
    missing = set(doc["symbols"]) - set(symbols)
    if missing:
        raise KeyError(f"golden {name!r} needs values for {sorted(missing)}")
    M = np.zeros((doc["rows"], doc["cols"]), dtype=np.complex128)
    for (i, j), s in doc["cells"]:
        M[i, j] = symbols[s]
    return M
