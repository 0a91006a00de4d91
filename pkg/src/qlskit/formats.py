"""
JSON file formats.

A complex scalar is ``[re, im]``, a plain number, or a string expression
such as ``"1/sqrt2"``, ``"(1+i)/sqrt(3)"``, ``"w*"`` or ``"2i/sqrt5"``.
Expressions are evaluated in double precision at load time. Recognised
names: ``i``, ``w`` (``exp(2 pi i / 3)``), ``w*`` (its conjugate), ``pi``,
and the functions ``sqrt``, ``exp``, ``conj``; ``sqrtN`` is shorthand for
``sqrt(N)`` and a digit directly before ``i`` multiplies.

Vectors are arrays of scalars and matrices are arrays of row arrays.
Documents carry a ``"type"`` field: ``qls``, ``qlis``, ``sppm``,
``unitary_family``, ``encoder`` or ``matrix``.
"""

from __future__ import annotations

import ast
import cmath
import json
import math
import operator
import re
from pathlib import Path
from typing import Any

import numpy as np

from .codes import EncoderTensor, UnitaryFamily
from .numlin import DimensionError
from .qlis import IsometrySquare, SkewPPM
from .qls import QuantumLatinSquare


class FormatError(ValueError):
    """Malformed document: bad JSON, missing fields, wrong shapes."""


OMEGA = cmath.exp(2j * math.pi / 3)

_NAMES = {"i": 1j, "w": OMEGA, "wc": OMEGA.conjugate(), "pi": math.pi}
_FUNCS = {"sqrt": cmath.sqrt, "exp": cmath.exp, "conj": lambda z: complex(z).conjugate()}
_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}


def _rewrite(expr: str) -> str:
    expr = re.sub(r"\bw\*(?=\s*(?:$|[)+\-/]))", "wc", expr)
    expr = re.sub(r"\bsqrt(\d+(?:\.\d+)?)", r"sqrt(\1)", expr)
    expr = re.sub(r"(\d)i\b", r"\1*i", expr)
    return expr


def _eval(node) -> complex:
    if isinstance(node, ast.Expression):
        return _eval(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(
        node.value, bool
    ):
        return node.value
    if isinstance(node, ast.Name) and node.id in _NAMES:
        return _NAMES[node.id]
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval(node.left), _eval(node.right))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
        return _UNARY[type(node.op)](_eval(node.operand))
    if (
        isinstance(node, ast.Call)
        and isinstance(node.func, ast.Name)
        and node.func.id in _FUNCS
        and len(node.args) == 1
        and not node.keywords
    ):
        arg = _eval(node.args[0])
        if node.func.id == "sqrt" and isinstance(arg, (int, float)) and arg >= 0:
            return math.sqrt(arg)
        return _FUNCS[node.func.id](arg)
    raise FormatError(f"unsupported expression element {ast.dump(node)}")


def parse_scalar(value: Any) -> complex:
    if isinstance(value, bool):
        raise FormatError(f"not a scalar: {value!r}")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, str):
        try:
            tree = ast.parse(_rewrite(value.strip()), mode="eval")
        except SyntaxError as exc:
            raise FormatError(f"cannot parse scalar {value!r}") from exc
        try:
            out = complex(_eval(tree))
        except (ZeroDivisionError, OverflowError) as exc:
            raise FormatError(f"cannot evaluate scalar {value!r}") from exc
        return out
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)
    ):
        return complex(value[0], value[1])
    raise FormatError(f"not a scalar: {value!r}")


def parse_vector(value: Any) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise FormatError(f"vector must be a non-empty array, got {type(value).__name__}")
    return np.array([parse_scalar(x) for x in value], dtype=np.complex128)


def parse_matrix(value: Any) -> np.ndarray:
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise FormatError("matrix must be a non-empty array of row arrays")
    width = len(value[0])
    if any(len(r) != width for r in value):
        raise FormatError("matrix rows have different lengths")
    return np.array([[parse_scalar(x) for x in row] for row in value], dtype=np.complex128).reshape(
        len(value), width
    )


def dump_scalar(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real) + 0.0, float(z.imag) + 0.0]


def dump_matrix(m: np.ndarray) -> list[list[list[float]]]:
    return [[dump_scalar(z) for z in row] for row in np.asarray(m)]


def dump_vector(v: np.ndarray) -> list[list[float]]:
    return [dump_scalar(z) for z in np.asarray(v).reshape(-1)]


def _require(doc: dict, key: str, kind=None):
    if key not in doc:
        raise FormatError(f"missing field {key!r}")
    val = doc[key]
    if kind is int and (not isinstance(val, int) or isinstance(val, bool) or val < 1):
        raise FormatError(f"field {key!r} must be a positive integer")
    return val


def _grid(doc: dict, key: str, n: int) -> list:
    grid = _require(doc, key)
    if not isinstance(grid, list) or len(grid) != n or any(
        not isinstance(r, list) or len(r) != n for r in grid
    ):
        raise FormatError(f"field {key!r} must be an {n}x{n} array")
    return grid


def qls_from_doc(doc: dict) -> QuantumLatinSquare:
    n = _require(doc, "n", int)
    grid = _grid(doc, "entries", n)
    entries = [[parse_vector(v) for v in row] for row in grid]
    if any(v.size != n for row in entries for v in row):
        raise FormatError(f"every QLS entry must have length {n}")
    return QuantumLatinSquare(np.array(entries))


def qlis_from_doc(doc: dict) -> IsometrySquare:
    n = _require(doc, "n", int)
    d = _require(doc, "d", int)
    grid = _grid(doc, "blocks", n)
    blocks = [[None if b is None else parse_matrix(b) for b in row] for row in grid]
    dims = np.array(
        [[0 if b is None else b.shape[1] for b in row] for row in blocks], dtype=int
    )
    if "block_dims" in doc:
        declared = np.asarray(doc["block_dims"])
        if declared.shape != (n, n) or not np.array_equal(declared, dims):
            raise FormatError("declared block_dims do not match the blocks")
    return IsometrySquare(n, d, dims, tuple(tuple(r) for r in blocks))


def sppm_from_doc(doc: dict) -> SkewPPM:
    n = _require(doc, "n", int)
    d = _require(doc, "d", int)
    grid = _grid(doc, "parts", n)
    parts = np.zeros((n, n, d, d), dtype=np.complex128)
    for i, row in enumerate(grid):
        for j, m in enumerate(row):
            if m is None:
                continue
            m = parse_matrix(m)
            if m.shape != (d, d):
                raise FormatError(f"part ({i},{j}) has shape {m.shape}, expected {(d, d)}")
            parts[i, j] = m
    return SkewPPM(n, d, parts)


def family_from_doc(doc: dict) -> UnitaryFamily:
    d = _require(doc, "d", int)
    members = _require(doc, "members")
    if not isinstance(members, list) or not members:
        raise FormatError("members must be a non-empty array")
    return UnitaryFamily(d, tuple(parse_matrix(m) for m in members))


def encoder_from_doc(doc: dict) -> EncoderTensor:
    n = _require(doc, "n", int)
    d = _require(doc, "d", int)
    m = parse_matrix(_require(doc, "map"))
    if m.shape != (n * d * n, d):
        raise FormatError(f"encoder map has shape {m.shape}, expected {(n * d * n, d)}")
    return EncoderTensor((n, d, n), m, float(doc.get("normalization", 1.0)))


def matrix_from_doc(doc: dict) -> np.ndarray:
    return parse_matrix(_require(doc, "matrix"))


_LOADERS = {
    "qls": qls_from_doc,
    "qlis": qlis_from_doc,
    "sppm": sppm_from_doc,
    "unitary_family": family_from_doc,
    "encoder": encoder_from_doc,
    "matrix": matrix_from_doc,
}


def from_doc(doc: Any):
    """Return ``(type, object)`` for a parsed JSON document."""
    if not isinstance(doc, dict):
        raise FormatError("document must be a JSON object")
    kind = doc.get("type")
    if kind not in _LOADERS:
        raise FormatError(f"unknown document type {kind!r}")
    try:
        return kind, _LOADERS[kind](doc)
    except DimensionError as exc:
        raise FormatError(str(exc)) from exc


def load(path) -> tuple[str, Any]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    return from_doc(doc)


def to_doc(obj) -> dict:
    if isinstance(obj, QuantumLatinSquare):
        return {
            "type": "qls",
            "n": obj.n,
            "entries": [[dump_vector(v) for v in row] for row in obj.entries],
        }
    if isinstance(obj, IsometrySquare):
        return {
            "type": "qlis",
            "n": obj.n,
            "d": obj.d,
            "block_dims": obj.block_dims.tolist(),
            "blocks": [[None if b is None else dump_matrix(b) for b in row] for row in obj.blocks],
        }
    if isinstance(obj, SkewPPM):
        return {
            "type": "sppm",
            "n": obj.n,
            "d": obj.d,
            "parts": [[dump_matrix(p) for p in row] for row in obj.parts],
        }
    if isinstance(obj, UnitaryFamily):
        return {"type": "unitary_family", "d": obj.d, "members": [dump_matrix(m) for m in obj.members]}
    if isinstance(obj, EncoderTensor):
        return {
            "type": "encoder",
            "n": obj.n,
            "d": obj.d,
            "map": dump_matrix(obj.map),
            "normalization": float(obj.normalization),
        }
    if isinstance(obj, np.ndarray) and obj.ndim == 2:
        return {"type": "matrix", "rows": obj.shape[0], "cols": obj.shape[1], "matrix": dump_matrix(obj)}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, sort_keys=True, allow_nan=False) + "\n"


def save(obj_or_doc, path) -> None:
    doc = obj_or_doc if isinstance(obj_or_doc, dict) else to_doc(obj_or_doc)
    Path(path).write_text(dumps(doc), encoding="utf-8")
