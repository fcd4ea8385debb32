"""JSON formats for measures, dynamics, families, deterministic and system-ancilla
tables and unitary families.

Rationals travel as ``"num/den"`` strings (surds as ``"a+b*sqrt(r)"``),
matrices as column-major lists of columns unless the document sets
``"layout": "rows"``, undefined conditionals as ``"undefined"`` and complex
numbers as ``{"re": .., "im": ..}``.  Every loader validates against the
JSON schema first and then lets the domain constructors check the semantics;
both kinds of failure surface as :class:`SchemaError`.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import jsonschema
import numpy as np

from .dynamics import MatrixFamily, ProbabilityDynamics, TabulatedMap
from .errors import InputError, ParseError, SchemaError, UnknownMember, UnknownSchema
from .implementation import Generator, ProcessFamily, transition_constant_member
from .measure import TrajectoryMeasure
from .quantum import UnitaryFamily
from .scalar import UNDEFINED, QuadSurd, format_scalar, parse_scalar
from .simplex import columns, from_columns, vertex
from .statistical import DeterministicSystem, SystemAncilla

_RATIONAL = {
    "oneOf": [
        {"type": "string", "pattern": r"^\s*[+-]?\d+(/\d+)?(\s*[+-]\s*(\d+(/\d+)?\s*\*\s*)?sqrt\(\d+\))?\s*$"},
        {"type": "integer"},
    ]
}
_GRID = {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1}
_VECTOR = {"type": "array", "items": _RATIONAL, "minItems": 1}
_MATRIX = {"type": "array", "items": _VECTOR, "minItems": 1}
_LAYOUT = {"enum": ["columns", "rows"]}
_COMPLEX = {
    "type": "object",
    "properties": {"re": {"type": "number"}, "im": {"type": "number"}},
    "required": ["re", "im"],
    "additionalProperties": False,
}

_MEASURE = {
    "type": "object",
    "properties": {
        "grid": _GRID,
        "n": {"type": "integer", "minimum": 1},
        "table": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "traj": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                    "p": _RATIONAL,
                },
                "required": ["traj", "p"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["grid", "n", "table"],
}

SCHEMAS = {
    "measure": {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "trajectory measure; omitted trajectories have probability 0",
        **_MEASURE,
    },
    "dynamics": {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "probability dynamics",
        "type": "object",
        "properties": {
            "kind": {"enum": ["matrix_family", "tabulated"]},
            "grid": _GRID,
            "n": {"type": "integer", "minimum": 1},
            "layout": _LAYOUT,
            "matrices": {"type": "array", "items": _MATRIX},
            "points": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": {"p0": _VECTOR, "trajectory": {"type": "array", "items": _VECTOR}},
                    "required": ["p0", "trajectory"],
                },
            },
        },
        "required": ["kind", "grid", "n"],
        "allOf": [
            {"if": {"properties": {"kind": {"const": "matrix_family"}}}, "then": {"required": ["matrices"]}},
            {"if": {"properties": {"kind": {"const": "tabulated"}}}, "then": {"required": ["points"]}},
        ],
    },
    "family": {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "stochastic process family",
        "type": "object",
        "properties": {
            "grid": _GRID,
            "n": {"type": "integer", "minimum": 1},
            "members": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": {"p0": _VECTOR, "measure": _MEASURE},
                    "required": ["p0", "measure"],
                },
            },
            "generator": {"enum": ["markov_product", "transition_constant", "non_markov_eps", None]},
        },
        "required": ["grid", "n", "members"],
    },
    "detsystem": {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "deterministic system D(t, i)",
        "type": "object",
        "properties": {
            "grid": _GRID,
            "n": {"type": "integer", "minimum": 1},
            "table": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": {
                        "t": {"type": "integer", "minimum": 0},
                        "i": {"type": "integer", "minimum": 1},
                        "out": {"type": "integer", "minimum": 1},
                    },
                    "required": ["t", "i", "out"],
                    "additionalProperties": False,
                },
            },
        },
        "required": ["grid", "n", "table"],
    },
    "ancilla": {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "system-ancilla table SA(t, i, alpha)",
        "type": "object",
        "properties": {
            "grid": _GRID,
            "n": {"type": "integer", "minimum": 1},
            "m": {"type": "integer", "minimum": 1},
            "lambda0": _VECTOR,
            "table": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": {
                        "t": {"type": "integer", "minimum": 0},
                        "i": {"type": "integer", "minimum": 1},
                        "alpha": {"type": "integer", "minimum": 1},
                        "out": {"type": "integer", "minimum": 1},
                    },
                    "required": ["t", "i", "alpha", "out"],
                    "additionalProperties": False,
                },
            },
        },
        "required": ["grid", "n", "m", "table"],
    },
    "unitary": {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "unitary family; complex entries as {re, im}",
        "type": "object",
        "properties": {
            "grid": _GRID,
            "dim": {"type": "integer", "minimum": 1},
            "layout": _LAYOUT,
            "matrices": {
                "type": "array",
                "items": {"type": "array", "items": {"type": "array", "items": _COMPLEX}},
            },
        },
        "required": ["grid", "matrices"],
    },
}


def schema(name: str) -> dict:
    try:
        return SCHEMAS[name]
    except KeyError:
        raise UnknownSchema(f"unknown schema {name!r}; choose from {sorted(SCHEMAS)}") from None


def schema_text(name: str) -> str:
    return json.dumps(schema(name), indent=2, sort_keys=True)


def validate(obj, name: str) -> None:
    try:
        jsonschema.validate(obj, schema(name))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{name}: {where}: {exc.message}") from None


# scalars and matrices ----------------------------------------------------------

def encode_scalar(x) -> str:
    return format_scalar(x)


def decode_scalar(s):
    if s == "undefined":
        return UNDEFINED
    if isinstance(s, bool) or not isinstance(s, (int, str)):
        raise SchemaError(f"expected a rational string, got {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    try:
        return parse_scalar(s)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def encode_vector(v) -> list:
    return [encode_scalar(x) for x in v]


def decode_vector(v) -> tuple:
    return tuple(decode_scalar(x) for x in v)


def encode_matrix(m) -> list:
    """Column-major list of columns."""
    return [encode_vector(c) for c in columns(m)]


def decode_matrix(cols, layout: str = "columns") -> tuple:
    rows = [decode_vector(r) for r in cols]
    if any(len(r) != len(rows[0]) for r in rows):
        raise SchemaError("ragged matrix")
    if layout == "rows":
        return tuple(rows)
    return from_columns(rows)


def encode_complex_matrix(u) -> list:
    u = np.asarray(u, dtype=complex)
    return [[{"re": float(z.real), "im": float(z.imag)} for z in u[:, j]] for j in range(u.shape[1])]


def decode_complex_matrix(cols, layout: str = "columns") -> np.ndarray:
    try:
        a = np.array([[complex(z["re"], z["im"]) for z in c] for c in cols], dtype=complex)
    except ValueError:
        raise SchemaError("ragged complex matrix") from None
    return a if layout == "rows" else a.T


def _semantic(kind: str, build):
    try:
        return build()
    except InputError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"{kind}: {exc}") from exc


# measures ----------------------------------------------------------------------

def dump_measure(mu: TrajectoryMeasure) -> dict:
    return {
        "grid": list(mu.grid),
        "n": mu.n,
        "table": [{"traj": list(w), "p": encode_scalar(p)} for w, p in sorted(mu.support().items())],
    }


def load_measure(obj: dict) -> TrajectoryMeasure:
    validate(obj, "measure")
    table: dict = {}
    for row in obj["table"]:
        w = tuple(row["traj"])
        if w in table:
            raise SchemaError(f"measure: trajectory {list(w)} listed twice")
        table[w] = decode_scalar(row["p"])
    return _semantic("measure", lambda: TrajectoryMeasure(tuple(obj["grid"]), obj["n"], table))


# dynamics ----------------------------------------------------------------------

def dump_dynamics(dyn) -> dict:
    dyn = ProbabilityDynamics.wrap(dyn)
    r = dyn.repr
    if isinstance(r, MatrixFamily):
        return {"kind": "matrix_family", "grid": list(r.grid), "n": r.n,
                "matrices": [encode_matrix(m) for m in r.matrices]}
    if isinstance(r, TabulatedMap):
        return {"kind": "tabulated", "grid": list(r.grid), "n": r.n,
                "points": [{"p0": encode_vector(p0), "trajectory": [encode_vector(v) for v in traj]}
                           for p0, traj in r.points.items()]}
    raise TypeError("only matrix families and tabulated maps can be serialized")


def load_dynamics(obj: dict) -> ProbabilityDynamics:
    validate(obj, "dynamics")
    grid, n = tuple(obj["grid"]), obj["n"]
    layout = obj.get("layout", "columns")
    if obj["kind"] == "matrix_family":
        mats = tuple(decode_matrix(m, layout) for m in obj["matrices"])
        if any(len(m) != n for m in mats):
            raise SchemaError(f"dynamics: matrices must be {n}x{n}")
        return _semantic("dynamics", lambda: ProbabilityDynamics.wrap(MatrixFamily(grid, mats)))
    pts = {}
    for row in obj["points"]:
        pts[decode_vector(row["p0"])] = tuple(decode_vector(v) for v in row["trajectory"])
    return _semantic("dynamics", lambda: ProbabilityDynamics.wrap(TabulatedMap(grid, n, pts)))


# families ----------------------------------------------------------------------

def dump_family(fam: ProcessFamily) -> dict:
    name = fam.generator.name if fam.generator is not None else None
    return {
        "grid": list(fam.grid),
        "n": fam.n,
        "members": [{"p0": encode_vector(p0), "measure": dump_measure(mu)} for p0, mu in fam.members.items()],
        "generator": name if name in ("markov_product", "transition_constant", "non_markov_eps") else None,
    }


def _rebuilt_generator(name, grid, n, members):
    if name == "transition_constant" and all(vertex(n, i) in members for i in range(1, n + 1)):
        from .measure import marginal_vector

        mats = tuple(from_columns([marginal_vector(members[vertex(n, i)], t) for i in range(1, n + 1)])
                     for t in grid)
        fam = MatrixFamily(grid, mats)
        return Generator(name, lambda p0: transition_constant_member(fam, p0))

    def untabulated(p0):
        raise UnknownMember(f"{p0} is not tabulated; the {name} rule cannot be rebuilt from the file")

    return Generator(name, untabulated)


def load_family(obj: dict) -> ProcessFamily:
    validate(obj, "family")
    grid, n = tuple(obj["grid"]), obj["n"]
    members = {}
    for row in obj["members"]:
        p0 = decode_vector(row["p0"])
        if p0 in members:
            raise SchemaError(f"family: member for {list(row['p0'])} listed twice")
        members[p0] = load_measure(row["measure"])
    name = obj.get("generator")
    gen = _semantic("family", lambda: _rebuilt_generator(name, grid, n, members)) if name else None
    return _semantic("family", lambda: ProcessFamily(grid, n, members, gen))


# deterministic and system-ancilla tables -----------------------------------------

def dump_detsystem(D: DeterministicSystem) -> dict:
    return {"grid": list(D.grid), "n": D.n,
            "table": [{"t": t, "i": i, "out": D(t, i)} for t in D.grid for i in range(1, D.n + 1)]}


def load_detsystem(obj: dict) -> DeterministicSystem:
    validate(obj, "detsystem")
    table = {}
    for row in obj["table"]:
        key = (row["t"], row["i"])
        if key in table:
            raise SchemaError(f"detsystem: D{key} listed twice")
        table[key] = row["out"]
    return _semantic("detsystem", lambda: DeterministicSystem(tuple(obj["grid"]), obj["n"], table))


def dump_ancilla(SA: SystemAncilla, lambda0=None) -> dict:
    out = {"grid": list(SA.grid), "n": SA.n, "m": SA.m,
           "table": [{"t": t, "i": i, "alpha": a, "out": SA(t, i, a)}
                     for t in SA.grid for i in range(1, SA.n + 1) for a in range(1, SA.m + 1)]}
    if lambda0 is not None:
        out["lambda0"] = encode_vector(lambda0)
    return out


def load_ancilla(obj: dict) -> tuple:
    """Returns ``(SA, lambda0)``; ``lambda0`` is ``None`` when the file has none."""
    validate(obj, "ancilla")
    table = {}
    for row in obj["table"]:
        key = (row["t"], row["i"], row["alpha"])
        if key in table:
            raise SchemaError(f"ancilla: SA{key} listed twice")
        table[key] = row["out"]
    SA = _semantic("ancilla", lambda: SystemAncilla(tuple(obj["grid"]), obj["n"], obj["m"], table))
    lam = decode_vector(obj["lambda0"]) if "lambda0" in obj else None
    if lam is not None and len(lam) != SA.m:
        raise SchemaError(f"ancilla: lambda0 needs {SA.m} entries")
    return SA, lam


# unitary families ----------------------------------------------------------------

def dump_unitary(U: UnitaryFamily) -> dict:
    return {"grid": list(U.grid), "dim": U.dim, "matrices": [encode_complex_matrix(u) for u in U.matrices]}


def load_unitary(obj: dict) -> UnitaryFamily:
    validate(obj, "unitary")
    layout = obj.get("layout", "columns")
    mats = tuple(decode_complex_matrix(m, layout) for m in obj["matrices"])
    if "dim" in obj and any(m.shape != (obj["dim"], obj["dim"]) for m in mats):
        raise SchemaError(f"unitary: matrices must be {obj['dim']}x{obj['dim']}")
    return _semantic("unitary", lambda: UnitaryFamily(tuple(obj["grid"]), mats))


# files and reports ---------------------------------------------------------------

LOADERS = {
    "measure": load_measure,
    "dynamics": load_dynamics,
    "family": load_family,
    "detsystem": load_detsystem,
    "ancilla": load_ancilla,
    "unitary": load_unitary,
}


def read_json(path) -> object:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_file(path, kind: str):
    if kind not in LOADERS:
        raise UnknownSchema(f"unknown schema {kind!r}")
    return LOADERS[kind](read_json(path))


def jsonable(obj):
    """Plain JSON value for report payloads (exact scalars become strings)."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, np.bool_):
        return bool(obj)
    if obj is UNDEFINED:
        return "undefined"
    if isinstance(obj, int):
        return obj
    if isinstance(obj, (Fraction, QuadSurd)):
        return encode_scalar(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, TrajectoryMeasure):
        return dump_measure(obj)
    if isinstance(obj, MatrixFamily):
        return {"grid": list(obj.grid), "matrices": [encode_matrix(m) for m in obj.matrices]}
    if isinstance(obj, dict):
        return {(k if isinstance(k, str) else json.dumps(jsonable(k))): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True, ensure_ascii=False)


def matrix_rows_text(m) -> str:
    """Row notation ``[[a,b],[c,d]]`` for human-readable summaries."""
    return "[" + ",".join("[" + ",".join(encode_scalar(x) for x in row) + "]" for row in m) + "]"
