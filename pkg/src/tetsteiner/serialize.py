"""Instance files, result records and tree export.

Instance JSON::

    {"id": "ex1",
     "vertices": [[0, 0, 0], [2, 0, 0], [-2, 0, 3], [-1, -1, 2]],
     "weights": {"B1": 1, "B2": 1, "B3": 1, "B4": 1, "B12": 1, "B34": 1},
     "pairing": "12-34",
     "options": {"tol": 1e-12, "max_iter": 10000, "seed": 0}}

Everything except ``vertices`` is optional.  Angles are degrees at this layer.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Iterator

import jsonschema
import numpy as np

from .errors import InputError
from .geometry import PAIRINGS, TetInstance

WEIGHT_NAMES = ("B1", "B2", "B3", "B4", "B12", "B34")
ANGLE_DECIMALS = 6

_positive = {"type": "number", "exclusiveMinimum": 0}
_vec3 = {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}

INSTANCE_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["vertices"],
    "additionalProperties": False,
    "properties": {
        "id": {"type": ["string", "integer"]},
        "vertices": {"type": "array", "items": _vec3, "minItems": 4, "maxItems": 4},
        "weights": {
            "type": "object",
            "additionalProperties": False,
            "properties": {k: _positive for k in WEIGHT_NAMES},
        },
        "pairing": {"enum": sorted(PAIRINGS)},
        "options": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "tol": {"type": "number", "minimum": 0},
                "max_iter": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer", "minimum": 0},
            },
        },
    },
}


@dataclass(frozen=True)
class InstanceSpec:
    id: str
    tet: TetInstance
    options: dict[str, Any] = field(default_factory=dict)


def parse_instance(obj: Any, default_id: str = "0") -> InstanceSpec:
    try:
        jsonschema.validate(obj, INSTANCE_SCHEMA)
    except jsonschema.ValidationError as err:
        path = "/".join(str(p) for p in err.absolute_path)
        raise InputError(f"invalid instance: {err.message}", path=path) from None
    weights = {k: 1.0 for k in WEIGHT_NAMES}
    weights.update(obj.get("weights", {}))
    tet = TetInstance(obj["vertices"], **weights, pairing=obj.get("pairing", "12-34"))
    return InstanceSpec(str(obj.get("id", default_id)), tet, dict(obj.get("options", {})))


def load_instance(path: str | Path) -> InstanceSpec:
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as err:
        raise InputError(f"cannot read instance file: {err}", path=str(path)) from None
    return parse_instance(obj, default_id=Path(path).stem)


def iter_jsonl(path: str | Path) -> Iterator[tuple[str, Any]]:
    """Yield (default id, parsed object or the exception) for each non-blank line."""
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as err:
        raise InputError(f"cannot read batch file: {err}", path=str(path)) from None
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            yield str(lineno), json.loads(line)
        except json.JSONDecodeError as err:
            yield str(lineno), InputError(f"line {lineno}: {err}", line=lineno)


def instance_to_json(spec: InstanceSpec) -> dict[str, Any]:
    t = spec.tet
    out: dict[str, Any] = {
        "id": spec.id,
        "vertices": t.vertices.tolist(),
        "weights": {k: getattr(t, k) for k in WEIGHT_NAMES},
        "pairing": t.pairing,
    }
    if spec.options:
        out["options"] = dict(spec.options)
    return out


def deg(x: float | None) -> float | None:
    if x is None or not math.isfinite(x):
        return x
    return round(math.degrees(x), ANGLE_DECIMALS)


def _vec(v) -> list[float] | None:
    return None if v is None else [float(c) for c in v]


@dataclass
class ResultRecord:
    id: str
    status: str
    pairing: str = "12-34"
    H: float | None = None
    phi_deg: float | None = None
    k1: float | None = None
    k2: float | None = None
    degeneracy: dict[str, Any] | None = None
    t12: float | None = None
    t34: float | None = None
    T12: list[float] | None = None
    T34: list[float] | None = None
    O12: list[float] | None = None
    O34: list[float] | None = None
    cost: float | None = None
    iterations: int | None = None
    residuals: list[float] | None = None
    omega_deg: float | None = None
    ft: dict[str, Any] | None = None
    oracle: dict[str, Any] | None = None
    trace: list[list[float]] | None = None
    error: dict[str, Any] | None = None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> ResultRecord:
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in known})

    def to_json(self) -> str:
        return dumps(self.to_dict())


CSV_HEADER = ("id", "H", "phi_deg", "t12", "t34", "cost", "omega_deg", "status")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def records_to_csv(records: list[ResultRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow([_cell(getattr(r, k)) for k in CSV_HEADER])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    return obj


def dumps(obj, indent: int | None = None) -> str:
    """Deterministic JSON: sorted keys, shortest round-trip floats, no NaN tokens."""
    return json.dumps(_jsonable(obj), sort_keys=True, indent=indent, allow_nan=False)


# -- tree export ------------------------------------------------------------

OBJ_NAMES = ("A1", "A2", "A3", "A4", "O12", "O34")
OBJ_LINES = ((1, 5), (2, 5), (3, 6), (4, 6), (5, 6))


def tree_to_obj(tree) -> str:
    pts = list(tree.terminals) + [tree.O12, tree.O34]
    out = ["# weighted Steiner tree: vertices A1 A2 A3 A4 O12 O34"]
    for p in pts:
        out.append("v " + " ".join(repr(float(c)) for c in p))
    out.extend(f"l {a} {b}" for a, b in OBJ_LINES)
    return "\n".join(out) + "\n"


EDGE_CSV_HEADER = ("edge", "x1", "y1", "z1", "x2", "y2", "z2", "weight", "length")


def tree_to_csv(tree) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(EDGE_CSV_HEADER)
    for e in tree.edges:
        row = [e.name, *(float(c) for c in e.p), *(float(c) for c in e.q), e.weight, e.length]
        writer.writerow([_cell(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def cost_from_edge_csv(text: str) -> float:
    rows = csv.DictReader(io.StringIO(text))
    return sum(float(r["weight"]) * float(r["length"]) for r in rows)


def export_tree(tree, fmt: str) -> bytes:
    if fmt == "obj":
        return tree_to_obj(tree).encode()
    if fmt == "csv":
        return tree_to_csv(tree).encode()
    raise InputError(f"unsupported export format {fmt!r}", allowed=["obj", "csv"])
