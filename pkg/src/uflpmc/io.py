"""JSON encoding of fields, matrices, matroids, instances and solutions.

Every reader validates against a JSON schema first and raises
:class:`InputError` with a line/column (syntax errors) or a JSON path
(schema errors).  Writers use a fixed key order, two-space indentation and
a trailing newline, so identical objects serialize to identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import jsonschema

from .field import FieldCtx, field_new
from .gfmatrix import GFMatrix
from .matroid import (
    Bond,
    DirectSum,
    Dual,
    Free,
    Graphic,
    Linear,
    Matroid,
    Multicolored,
    Oracle,
    Partition,
    Restriction,
    Truncation,
    Uniform,
    UnionFree,
)
from .reductions import StcInstance, clique_client_matroid
from .spmc import SpmcInstance, SpmcSolution
from .uflp import UflpInstance, UflpSolution

__all__ = [
    "InputError",
    "SCHEMAS",
    "load_json",
    "dumps",
    "field_to_json",
    "field_from_json",
    "matrix_from_json",
    "matroid_to_json",
    "matroid_from_json",
    "instance_to_json",
    "instance_from_json",
    "solution_to_json",
    "solution_from_json",
    "spmc_from_json",
    "spmc_solution_to_json",
    "stc_from_json",
]


class InputError(ValueError):
    """Malformed or invalid input file."""


# ---------------------------------------------------------------------------
# Schemas

_INT_LIST = {"type": "array", "items": {"type": "integer"}}
_LABELS = {"type": "array", "items": {"type": "integer", "minimum": 1}}
_SCALAR = {"type": ["integer", "string"]}

FIELD_SCHEMA = {
    "type": "object",
    "required": ["p"],
    "properties": {
        "p": {"type": "integer", "minimum": 2},
        "d": {"type": "integer", "minimum": 1},
        "modulus": _INT_LIST,
    },
    "additionalProperties": False,
}

MATRIX_SCHEMA = {
    "type": "object",
    "required": ["field", "labels", "entries"],
    "properties": {
        "field": FIELD_SCHEMA,
        "rows": {"type": "integer", "minimum": 0},
        "labels": _LABELS,
        "entries": {
            "type": "array",
            "items": {"type": "array", "items": {"anyOf": [{"type": "integer"}, _INT_LIST]}},
        },
    },
    "additionalProperties": False,
}

MATROID_SCHEMA: dict = {
    "$defs": {
        "matroid": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {
                    "enum": [
                        "uniform", "partition", "multicolored", "free", "graphic", "bond",
                        "linear", "dual", "truncation", "union_free", "direct_sum", "restriction",
                    ]
                },
                "ground": _LABELS,
                "rank": {"type": "integer", "minimum": 0},
                "blocks": {
                    "type": "array",
                    "items": {
                        "anyOf": [
                            _LABELS,
                            {
                                "type": "object",
                                "required": ["ground", "rank"],
                                "properties": {"ground": _LABELS, "rank": {"type": "integer", "minimum": 0}},
                                "additionalProperties": False,
                            },
                        ]
                    },
                },
                "vertices": {"anyOf": [{"type": "integer", "minimum": 0}, {"type": "array", "items": _SCALAR}]},
                "edges": {"type": "array", "items": {"type": "array", "items": _SCALAR, "minItems": 2, "maxItems": 2}},
                "edge_labels": _LABELS,
                "matrix": MATRIX_SCHEMA,
                "matroid": {"$ref": "#/$defs/matroid"},
                "parts": {"type": "array", "items": {"$ref": "#/$defs/matroid"}},
                "k": {"type": "integer", "minimum": 0},
                "extra": _LABELS,
            },
            "additionalProperties": False,
            "allOf": [
                {"if": {"properties": {"kind": {"const": "uniform"}}}, "then": {"required": ["ground", "rank"]}},
                {"if": {"properties": {"kind": {"enum": ["partition", "multicolored"]}}}, "then": {"required": ["blocks"]}},
                {"if": {"properties": {"kind": {"const": "free"}}}, "then": {"required": ["ground"]}},
                {"if": {"properties": {"kind": {"enum": ["graphic", "bond"]}}}, "then": {"required": ["vertices", "edges", "edge_labels"]}},
                {"if": {"properties": {"kind": {"const": "linear"}}}, "then": {"required": ["matrix"]}},
                {"if": {"properties": {"kind": {"const": "dual"}}}, "then": {"required": ["matroid"]}},
                {"if": {"properties": {"kind": {"const": "truncation"}}}, "then": {"required": ["matroid", "k"]}},
                {"if": {"properties": {"kind": {"const": "union_free"}}}, "then": {"required": ["matroid", "extra"]}},
                {"if": {"properties": {"kind": {"const": "direct_sum"}}}, "then": {"required": ["parts"]}},
                {"if": {"properties": {"kind": {"const": "restriction"}}}, "then": {"required": ["matroid", "ground"]}},
            ],
        }
    },
    "$ref": "#/$defs/matroid",
}

_MATROID_REF = {"$ref": "#/$defs/matroid"}

INSTANCE_SCHEMA = {
    "$defs": MATROID_SCHEMA["$defs"],
    "type": "object",
    "required": ["n", "costs", "profits"],
    "properties": {
        "n": {"type": "integer", "minimum": 0},
        "costs": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "profits": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "integer", "minimum": 0},
                "minItems": 3,
                "maxItems": 3,
            },
        },
        "facility_matroids": {"type": "array", "items": _MATROID_REF},
        "client_matroids": {"type": "array", "items": _MATROID_REF},
        "meta": {"type": "object"},
    },
    "additionalProperties": False,
}

SOLUTION_SCHEMA = {
    "type": "object",
    "required": ["A", "C", "profit", "assignment"],
    "properties": {
        "A": _LABELS,
        "C": _LABELS,
        "profit": {"type": "integer"},
        "assignment": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}},
        "probabilistic": {"type": "boolean"},
        "epsilon": {"type": ["number", "null"]},
        "seed": {"type": ["integer", "null"]},
    },
    "additionalProperties": False,
}

SPMC_SCHEMA = {
    "$defs": MATROID_SCHEMA["$defs"],
    "type": "object",
    "required": ["universe", "matroids", "family", "alpha"],
    "properties": {
        "universe": {"anyOf": [{"type": "integer", "minimum": 0}, _LABELS]},
        "matroids": {"type": "array", "items": _MATROID_REF, "minItems": 1},
        "family": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["set", "weight"],
                "properties": {"set": _LABELS, "weight": {"type": "integer"}},
                "additionalProperties": False,
            },
        },
        "alpha": {"type": "integer", "minimum": 1},
    },
    "additionalProperties": False,
}

STC_SCHEMA = {
    "type": "object",
    "required": ["edges"],
    "properties": {
        "vertices": {"type": "array", "items": _SCALAR},
        "edges": {"type": "array", "items": {"type": "array", "items": _SCALAR, "minItems": 2, "maxItems": 2}},
        "communities": {"type": "array", "items": {"type": "array", "items": _SCALAR}},
        "r": {"type": "integer", "minimum": 0},
    },
    "additionalProperties": False,
}

_WEIGHTED_SETS = SPMC_SCHEMA["properties"]["family"]

REP_SCHEMA = {
    "$defs": MATROID_SCHEMA["$defs"],
    "type": "object",
    "required": ["matroids", "family", "candidate", "q"],
    "properties": {
        "matroids": {"type": "array", "items": _MATROID_REF, "minItems": 1},
        "family": _WEIGHTED_SETS,
        "candidate": _WEIGHTED_SETS,
        "q": {"type": "integer", "minimum": 0},
        "universe": _LABELS,
    },
    "additionalProperties": False,
}

SCHEMAS = {
    "field": FIELD_SCHEMA,
    "matrix": MATRIX_SCHEMA,
    "matroid": MATROID_SCHEMA,
    "instance": INSTANCE_SCHEMA,
    "solution": SOLUTION_SCHEMA,
    "spmc": SPMC_SCHEMA,
    "stc": STC_SCHEMA,
    "rep": REP_SCHEMA,
}


def _validate(doc: Any, schema: dict, source: str) -> None:
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path)
        raise InputError(f"{source}: {path}: {err.message}")


def load_json(path: str | Path, kind: str) -> Any:
    """Parse and schema-validate a file of the given kind."""
    source = str(path)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{source}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    _validate(doc, SCHEMAS[kind], source)
    return doc


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Fields, matrices, matroids


def field_to_json(ctx: FieldCtx) -> dict:
    return ctx.to_json()


def field_from_json(doc: dict) -> FieldCtx:
    d = doc.get("d", 1)
    if d == 1:
        return FieldCtx(doc["p"])
    return field_new(doc["p"], d, doc.get("modulus"))


def matrix_from_json(doc: dict) -> GFMatrix:
    ctx = field_from_json(doc["field"])
    entries = doc["entries"]
    if not entries:
        return GFMatrix.zeros(ctx, doc.get("rows", 0), doc["labels"])
    if "rows" in doc and doc["rows"] != len(entries):
        raise ValueError(f"matrix declares {doc['rows']} rows but lists {len(entries)}")
    return GFMatrix(ctx, doc["labels"], entries)


def matroid_to_json(m: Matroid) -> dict:
    if isinstance(m, Uniform):
        return {"kind": "uniform", "ground": sorted(m.ground), "rank": m.rank_bound}
    if isinstance(m, Multicolored):
        return {"kind": "multicolored", "blocks": [sorted(g) for g, _ in m.blocks]}
    if isinstance(m, Partition):
        return {"kind": "partition", "blocks": [{"ground": sorted(g), "rank": r} for g, r in m.blocks]}
    if isinstance(m, Free):
        return {"kind": "free", "ground": sorted(m.ground)}
    if isinstance(m, Graphic):
        return {
            "kind": "bond" if isinstance(m, Bond) else "graphic",
            "vertices": list(m.vertices),
            "edges": [list(e) for e in m.edges],
            "edge_labels": list(m.edge_labels),
        }
    if isinstance(m, Linear):
        return {"kind": "linear", "matrix": m.matrix.to_json()}
    if isinstance(m, Dual):
        return {"kind": "dual", "matroid": matroid_to_json(m.inner)}
    if isinstance(m, Truncation):
        return {"kind": "truncation", "matroid": matroid_to_json(m.inner), "k": m.k}
    if isinstance(m, UnionFree):
        return {"kind": "union_free", "matroid": matroid_to_json(m.inner), "extra": sorted(m.extra)}
    if isinstance(m, DirectSum):
        return {"kind": "direct_sum", "parts": [matroid_to_json(p) for p in m.parts]}
    if isinstance(m, Restriction):
        return {"kind": "restriction", "matroid": matroid_to_json(m.inner), "ground": sorted(m.ground)}
    if isinstance(m, Oracle):
        raise TypeError(f"oracle matroid {m.name!r} cannot be serialized")
    raise TypeError(f"unknown matroid type {type(m).__name__}")


def matroid_from_json(doc: dict) -> Matroid:
    kind = doc["kind"]
    if kind == "uniform":
        return Uniform(doc["ground"], doc["rank"])
    if kind == "multicolored":
        return Multicolored([b if isinstance(b, list) else b["ground"] for b in doc["blocks"]])
    if kind == "partition":
        return Partition([(b["ground"], b["rank"]) if isinstance(b, dict) else (b, 1) for b in doc["blocks"]])
    if kind == "free":
        return Free(doc["ground"])
    if kind in ("graphic", "bond"):
        cls = Bond if kind == "bond" else Graphic
        return cls(doc["vertices"], [tuple(e) for e in doc["edges"]], doc["edge_labels"])
    if kind == "linear":
        return Linear(matrix_from_json(doc["matrix"]))
    if kind == "dual":
        return Dual(matroid_from_json(doc["matroid"]))
    if kind == "truncation":
        return Truncation(matroid_from_json(doc["matroid"]), doc["k"])
    if kind == "union_free":
        return UnionFree(matroid_from_json(doc["matroid"]), doc["extra"])
    if kind == "direct_sum":
        return DirectSum([matroid_from_json(p) for p in doc["parts"]])
    if kind == "restriction":
        return Restriction(matroid_from_json(doc["matroid"]), doc["ground"])
    raise ValueError(f"unknown matroid kind {kind!r}")


# ---------------------------------------------------------------------------
# Instances and solutions


def instance_to_json(inst: UflpInstance) -> dict:
    clients = inst.client_matroids
    if "clique" in inst.meta:
        # the clique client matroid is rebuilt from the stored graph on load
        clients = [m for m in clients if not isinstance(m, Oracle)]
    doc: dict = {
        "n": inst.n,
        "costs": list(inst.costs),
        "profits": [[u, v, p] for (u, v), p in sorted(inst.profits.items())],
        "facility_matroids": [matroid_to_json(m) for m in inst.facility_matroids],
        "client_matroids": [matroid_to_json(m) for m in clients],
    }
    if inst.meta:
        doc["meta"] = inst.meta
    return doc


def instance_from_json(doc: dict) -> UflpInstance:
    meta = doc.get("meta", {})
    clients = [matroid_from_json(m) for m in doc.get("client_matroids", [])]
    if "clique" in meta:
        g = meta["clique"]
        clients.append(clique_client_matroid(g["vertices"], [tuple(e) for e in g["edges"]], g["k"]))
    return UflpInstance(
        doc["n"],
        doc["costs"],
        {(u, v): p for u, v, p in doc["profits"]},
        [matroid_from_json(m) for m in doc.get("facility_matroids", [])],
        clients,
        meta,
    )


def solution_to_json(sol: UflpSolution) -> dict:
    return {
        "A": list(sol.A),
        "C": list(sol.C),
        "profit": sol.profit,
        "assignment": [[v, u] for v, u in sol.assignment],
        "probabilistic": sol.probabilistic,
        "epsilon": sol.epsilon,
        "seed": sol.seed,
    }


def solution_from_json(doc: dict) -> UflpSolution:
    return UflpSolution(
        tuple(doc["A"]),
        tuple(doc["C"]),
        doc["profit"],
        tuple((v, u) for v, u in doc["assignment"]),
        doc.get("probabilistic", False),
        doc.get("epsilon"),
        doc.get("seed"),
    )


def spmc_from_json(doc: dict) -> SpmcInstance:
    uni = doc["universe"]
    universe = tuple(range(1, uni + 1)) if isinstance(uni, int) else tuple(uni)
    family: dict[tuple, int] = {}
    for entry in doc["family"]:
        key = tuple(sorted(entry["set"]))
        if key in family:
            raise ValueError(f"duplicate set {list(key)} in family")
        family[key] = entry["weight"]
    return SpmcInstance([matroid_from_json(m) for m in doc["matroids"]], family, doc["alpha"], universe)


def spmc_solution_to_json(sol: SpmcSolution | None) -> dict:
    if sol is None:
        return {"feasible": False}
    return {"feasible": True, "chosen": [list(s) for s in sol.chosen], "total_weight": sol.total_weight}


def stc_from_json(doc: dict) -> StcInstance:
    edges = [tuple(e) for e in doc["edges"]]
    vertices = doc.get("vertices")
    if vertices is None:
        vertices = list(dict.fromkeys(v for e in edges for v in e))
    return StcInstance(vertices, edges, doc.get("communities", []), doc.get("r", 0))
