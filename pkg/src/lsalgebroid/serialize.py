"""JSON formats for structures, subbundles and symmetric tensors.

Every file carries ``"$schema_version": 1``.  Indices are 1-based and scalars
are expression strings (``"x1^2*x2/2"``).  Shape errors come from the JSON
schema; semantic errors (index ranges, unknown variables, bad expressions)
are raised as :class:`SchemaError` with a JSON pointer to the offending value.
"""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema

from .algebroid import KINDS, AlgebroidStructure
from .bialgebroid import BialgebroidCandidate, SymTensor
from .errors import AlgebroidError, SchemaError
from .presymplectic import (
    BIALGEBROID,
    EXPLICIT,
    SYMPLECTIC,
    PreSymplecticStructure,
    Subbundle,
    from_symplectic,
)
from .scalar import DEFAULT_MAX_DEGREE, Base, VectorField, parse_scalar
from .tensors import FormTensor

SCHEMA_VERSION = 1

_scalar = {"type": ["string", "integer"]}
_pair_key = "^[1-9][0-9]*,[1-9][0-9]*$"
_index_key = "^[1-9][0-9]*$"
_matrix = {"type": "array", "minItems": 1, "items": {"type": "array", "items": _scalar}}
_table = {
    "type": "object",
    "propertyNames": {"pattern": _pair_key},
    "additionalProperties": {
        "type": "object",
        "propertyNames": {"pattern": _index_key},
        "additionalProperties": _scalar,
    },
}
_variables = {"type": "array", "items": {"type": "string"}, "uniqueItems": True}
_version = {"const": SCHEMA_VERSION}

ALGEBROID_SCHEMA = {
    "type": "object",
    "required": ["$schema_version", "kind", "variables", "rank"],
    "additionalProperties": False,
    "properties": {
        "$schema_version": _version,
        "kind": {"enum": list(KINDS)},
        "variables": _variables,
        "parameters": _variables,
        "rank": {"type": "integer", "minimum": 1},
        "dual": {"type": "boolean"},
        "labels": {"type": "array", "items": {"type": "string"}},
        "products": _table,
        "anchor": {
            "type": "object",
            "propertyNames": {"pattern": _index_key},
            "additionalProperties": {"type": "object", "additionalProperties": _scalar},
        },
    },
}

SUBBUNDLE_SCHEMA = {
    "type": "object",
    "required": ["$schema_version", "sections"],
    "additionalProperties": False,
    "properties": {
        "$schema_version": _version,
        "variables": _variables,
        "sections": _matrix,
    },
}

SYMMETRIC_SCHEMA = {
    "type": "object",
    "required": ["$schema_version", "matrix"],
    "additionalProperties": False,
    "properties": {
        "$schema_version": _version,
        "variables": _variables,
        "matrix": _matrix,
    },
}

_ref = {"oneOf": [{"type": "string"}, {"type": "object"}]}

PRESYMPLECTIC_SCHEMA = {
    "type": "object",
    "required": ["$schema_version", "source"],
    "properties": {
        "$schema_version": _version,
        "source": {"enum": [BIALGEBROID, SYMPLECTIC, EXPLICIT]},
    },
    "allOf": [
        {
            "if": {"properties": {"source": {"const": BIALGEBROID}}},
            "then": {"required": ["A", "Astar"], "additionalProperties": False,
                     "properties": {"$schema_version": {}, "source": {}, "A": _ref, "Astar": _ref}},
        },
        {
            "if": {"properties": {"source": {"const": SYMPLECTIC}}},
            "then": {"required": ["lie", "omega"], "additionalProperties": False,
                     "properties": {"$schema_version": {}, "source": {}, "lie": _ref, "omega": _matrix}},
        },
        {
            "if": {"properties": {"source": {"const": EXPLICIT}}},
            "then": {
                "required": ["variables", "rank", "products", "omega"],
                "additionalProperties": False,
                "properties": {
                    "$schema_version": {}, "source": {}, "variables": _variables,
                    "rank": {"type": "integer", "minimum": 1}, "products": _table,
                    "anchor": ALGEBROID_SCHEMA["properties"]["anchor"], "omega": _matrix,
                },
            },
        },
    ],
}

CHRISTOFFEL_SCHEMA = {
    "type": "object",
    "propertyNames": {"pattern": f"({_pair_key})|(^\\$schema_version$)"},
    "properties": {"$schema_version": _version},
    "additionalProperties": _table["additionalProperties"],
}


_check = {
    "type": "object",
    "required": ["name", "passed"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "passed": {"type": "boolean"},
        "witness": {
            "type": "object",
            "required": ["inputs", "residual"],
            "additionalProperties": False,
            "properties": {"inputs": {"type": "array", "items": {"type": "string"}},
                           "residual": {"type": "string"}},
        },
        "details": {"type": "object"},
        "elapsed_ms": {"type": "number"},
        "checks": {"type": "array", "items": {"$ref": "#/$defs/check"}},
    },
}

REPORT_SCHEMA = {
    "$defs": {"check": _check},
    "type": "object",
    "required": ["$schema_version", "tool", "version", "command", "inputs", "parameters", "checks", "passed"],
    "properties": {
        "$schema_version": _version,
        "tool": {"const": "lsalgebroid"},
        "version": {"type": "string"},
        "command": {"type": "string"},
        "inputs": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "path", "sha256"],
                "additionalProperties": False,
                "properties": {"name": {"type": "string"}, "path": {"type": "string"},
                               "sha256": {"type": "string", "pattern": "^[0-9a-f]{64}$"}},
            },
        },
        "parameters": {"type": "object"},
        "checks": {"type": "array", "items": {"$ref": "#/$defs/check"}},
        "passed": {"type": "boolean"},
    },
}


def _pointer(parts):
    return "/" + "/".join(str(p).replace("~", "~0").replace("/", "~1") for p in parts) if parts else ""


def validate(doc, schema, prefix=()):
    """Raise SchemaError for the first (deterministically ordered) violation."""
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(doc), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        err = errors[0]
        pointer = _pointer(list(prefix) + list(err.absolute_path))
        raise SchemaError(err.message, pointer)


def read_json(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from None


def _scalar_at(base, value, pointer):
    try:
        return base.scalar(value if isinstance(value, str) else int(value))
    except AlgebroidError as exc:
        raise SchemaError(f"{exc}", pointer) from None


def _index(text, n, pointer):
    i = int(text)
    if not 1 <= i <= n:
        raise SchemaError(f"index {i} outside 1..{n}", pointer)
    return i - 1


def _make_base(variables, max_degree, parameters=()):
    try:
        return Base(tuple(variables), tuple(parameters), max_degree)
    except ValueError as exc:
        raise SchemaError(f"{exc}", "/variables") from None


def _parse_table(base, n, table, prefix):
    c = [[[base.zero] * n for _ in range(n)] for _ in range(n)]
    for key in sorted(table):
        i, j = (_index(t, n, f"{prefix}/{key}") for t in key.split(","))
        for kk in sorted(table[key]):
            ptr = f"{prefix}/{key}/{kk}"
            c[i][j][_index(kk, n, ptr)] = _scalar_at(base, table[key][kk], ptr)
    return c


def _parse_anchor(base, n, anchor, prefix):
    fields = []
    for i in range(n):
        comps = anchor.get(str(i + 1), {})
        for name in comps:
            if name not in base.variables:
                ptr = f"{prefix}/{i + 1}/{name}"
                raise SchemaError(f"undeclared variable {name!r}", ptr)
        fields.append(VectorField(base, tuple(
            _scalar_at(base, comps.get(v, 0), f"{prefix}/{i + 1}/{v}") for v in base.variables)))
    for key in anchor:
        _index(key, n, f"{prefix}/{key}")
    return fields


def algebroid_from_json(doc, max_degree=DEFAULT_MAX_DEGREE, prefix=()):
    validate(doc, ALGEBROID_SCHEMA, prefix)
    p = _pointer(prefix)
    base = _make_base(doc["variables"], max_degree, doc.get("parameters", ()))
    r = doc["rank"]
    labels = tuple(doc.get("labels", ()))
    if labels and len(labels) != r:
        raise SchemaError(f"need {r} labels", f"{p}/labels")
    c = _parse_table(base, r, doc.get("products", {}), f"{p}/products")
    anchor = _parse_anchor(base, r, doc.get("anchor", {}), f"{p}/anchor")
    return AlgebroidStructure(doc["kind"], base, c, anchor, doc.get("dual", False), labels)


def _table_to_json(products, n):
    out = {}
    for i in range(n):
        for j in range(n):
            row = {str(k + 1): str(products[i][j][k]) for k in range(n) if not products[i][j][k].is_zero}
            if row:
                out[f"{i + 1},{j + 1}"] = row
    return out


def _anchor_to_json(anchor, base):
    out = {}
    for i, v in enumerate(anchor):
        comps = {x: str(c) for x, c in zip(base.variables, v.coeffs) if not c.is_zero}
        if comps:
            out[str(i + 1)] = comps
    return out


def algebroid_to_json(alg):
    doc = {
        "$schema_version": SCHEMA_VERSION,
        "kind": alg.kind,
        "variables": list(alg.base.variables),
        "rank": alg.rank,
    }
    if alg.base.parameters:
        doc["parameters"] = list(alg.base.parameters)
    if alg.dual:
        doc["dual"] = True
    if alg.labels:
        doc["labels"] = list(alg.labels)
    doc["products"] = _table_to_json(alg.products, alg.rank)
    doc["anchor"] = _anchor_to_json(alg.anchor, alg.base)
    return doc


def _matrix(base, rows, pointer, square=None):
    width = len(rows[0])
    out = []
    for a, row in enumerate(rows):
        if len(row) != width or (square is not None and len(row) != square):
            ptr = f"{pointer}/{a}"
            raise SchemaError(f"row has length {len(row)}", ptr)
        out.append([_scalar_at(base, v, f"{pointer}/{a}/{b}") for b, v in enumerate(row)])
    if square is not None and len(out) != square:
        raise SchemaError(f"expected {square} rows", pointer)
    return out


def symmetric_from_json(doc, base):
    validate(doc, SYMMETRIC_SCHEMA)
    if "variables" in doc:
        base = base.union(_make_base(doc["variables"], base.max_degree))
    rows = doc["matrix"]
    m = _matrix(base, rows, "/matrix", square=len(rows))
    for i in range(len(m)):
        for j in range(i + 1, len(m)):
            if m[i][j] != m[j][i]:
                ptr = f"/matrix/{i}/{j}"
                raise SchemaError("matrix is not symmetric", ptr)
    return SymTensor(m)


def symmetric_to_json(H):
    return {"$schema_version": SCHEMA_VERSION, "matrix": [[str(a) for a in row] for row in H.matrix]}


def subbundle_from_json(doc, base, size):
    validate(doc, SUBBUNDLE_SCHEMA)
    if "variables" in doc:
        base = base.union(_make_base(doc["variables"], base.max_degree))
    rows = _matrix(base, doc["sections"], "/sections")
    if len(rows[0]) != size:
        raise SchemaError(f"sections need {size} entries, got {len(rows[0])}", "/sections/0")
    return Subbundle.from_rows(base, rows)


def subbundle_to_json(F):
    return {"$schema_version": SCHEMA_VERSION, "sections": [[str(c) for c in s.coeffs] for s in F.sections]}


def _resolve(ref, where, max_degree, pointer):
    if isinstance(ref, str):
        path = Path(where) / ref if where is not None else Path(ref)
        return algebroid_from_json(read_json(path), max_degree)
    return algebroid_from_json(ref, max_degree, pointer)


def presymplectic_from_json(doc, where=None, max_degree=DEFAULT_MAX_DEGREE):
    """``where`` is the directory that relative file references resolve against."""
    validate(doc, PRESYMPLECTIC_SCHEMA)
    source = doc["source"]
    if source == BIALGEBROID:
        A = _resolve(doc["A"], where, max_degree, ("A",))
        Astar = _resolve(doc["Astar"], where, max_degree, ("Astar",))
        return PreSymplecticStructure.from_bialgebroid(BialgebroidCandidate(A, Astar))
    if source == SYMPLECTIC:
        lie = _resolve(doc["lie"], where, max_degree, ("lie",))
        m = _matrix(lie.base, doc["omega"], "/omega", square=lie.rank)
        terms = {((a,), b): m[a][b] for a in range(lie.rank) for b in range(lie.rank) if not m[a][b].is_zero}
        return from_symplectic(lie, FormTensor(lie.base, lie.rank, 1, terms))
    base = _make_base(doc["variables"], max_degree)
    n = 2 * doc["rank"]
    c = _parse_table(base, n, doc["products"], "/products")
    anchor = _parse_anchor(base, n, doc.get("anchor", {}), "/anchor")
    m = _matrix(base, doc["omega"], "/omega", square=n)
    return PreSymplecticStructure.explicit(base, [[c[a][b] for b in range(n)] for a in range(n)], anchor, m)


def presymplectic_to_json(E):
    doc = {"$schema_version": SCHEMA_VERSION, "source": E.source}
    if E.source == BIALGEBROID:
        doc["A"] = algebroid_to_json(E.data.A)
        doc["Astar"] = algebroid_to_json(E.data.Astar)
    elif E.source == SYMPLECTIC:
        doc["lie"] = algebroid_to_json(E.data[0])
        doc["omega"] = [[str(a) for a in row] for row in E.omega]
    else:
        n = E.size
        doc["variables"] = list(E.base.variables)
        doc["rank"] = E.rank
        doc["products"] = _table_to_json([[E.data[a][b].coeffs for b in range(n)] for a in range(n)], n)
        doc["anchor"] = _anchor_to_json(E.anchor, E.base)
        doc["omega"] = [[str(a) for a in row] for row in E.omega]
    return doc


def christoffel_from_json(doc, base):
    validate(doc, CHRISTOFFEL_SCHEMA)
    table = {k: v for k, v in doc.items() if k != "$schema_version"}
    return _parse_table(base, base.nvars, table, "")


def dumps(doc):
    """Canonical serialisation: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def parse_expression(text, base, pointer=""):
    try:
        return parse_scalar(text, base)
    except AlgebroidError as exc:
        raise SchemaError(str(exc), pointer) from None
