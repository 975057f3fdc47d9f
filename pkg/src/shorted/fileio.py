"""JSON file formats for matrices, subspaces, vectors and reports.

MatrixFile::

    {"rows": 2, "cols": 2, "complex": false, "data": [1, 2, 3, 6]}

``data`` is row-major; with ``"complex": true`` every entry is an
``[re, im]`` pair. A SubspaceFile is ``{"ambient": n, "basis": MatrixFile}``
whose columns span the subspace. A basis that is already orthonormal is kept
as given (so coordinate order survives a round trip); anything else is
orthonormalized on load.

Reports are dataclasses. They are written with enums as their values, arrays
as MatrixFile objects and infinities as the string ``"inf"``, so the output
is strict JSON. One-dimensional arrays carry ``"vector": true`` so they
come back with their original shape. Python's float repr is the shortest round-tripping decimal,
so ``report_from_json(type(r), report_to_json(r))`` reproduces ``r`` exactly.
"""

import dataclasses
import json
import math
import typing
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import InvalidInput
from .numerics import DEFAULT_TOL
from .subspaces import Subspace, from_spanning

__all__ = [
    "matrix_to_json",
    "matrix_from_json",
    "subspace_to_json",
    "subspace_from_json",
    "vector_from_json",
    "report_to_json",
    "report_from_json",
    "load_json",
    "load_matrix",
    "load_subspace",
    "load_vector",
    "dump",
]


_KEEP_TOL = 1e-12


def _where(source, field):
    return f"{source}: field '{field}'" if source else f"field '{field}'"


def _require(obj, field, source):
    if not isinstance(obj, dict):
        raise InvalidInput(f"{source or 'input'}: expected a JSON object, got {type(obj).__name__}")
    if field not in obj:
        raise InvalidInput(f"{_where(source, field)} is missing")
    return obj[field]


def _int_field(obj, field, source, minimum=0):
    value = _require(obj, field, source)
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise InvalidInput(f"{_where(source, field)} must be an integer >= {minimum}, got {value!r}")
    return value


def _real(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidInput(f"{where} must hold numbers, got {value!r}")
    if not math.isfinite(value):
        raise InvalidInput(f"{where} must be finite")
    return float(value)


def matrix_to_json(m):
    m = np.asarray(m)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    is_complex = bool(np.iscomplexobj(m) and np.any(m.imag != 0))
    flat = m.reshape(-1)
    if is_complex:
        data = [[float(v.real), float(v.imag)] for v in flat]
    else:
        data = [float(v.real) for v in flat]
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]), "complex": is_complex, "data": data}


def matrix_from_json(obj, source=""):
    rows = _int_field(obj, "rows", source)
    cols = _int_field(obj, "cols", source)
    is_complex = obj.get("complex", False)
    if not isinstance(is_complex, bool):
        raise InvalidInput(f"{_where(source, 'complex')} must be true or false")
    data = _require(obj, "data", source)
    if not isinstance(data, list):
        raise InvalidInput(f"{_where(source, 'data')} must be a list")
    if len(data) != rows * cols:
        raise InvalidInput(
            f"{_where(source, 'data')} has {len(data)} entries, expected rows*cols = {rows * cols}"
        )
    where = _where(source, "data")
    out = np.empty(rows * cols, dtype=np.complex128)
    for i, entry in enumerate(data):
        if is_complex:
            if not (isinstance(entry, list) and len(entry) == 2):
                raise InvalidInput(f"{where}[{i}] must be an [re, im] pair")
            out[i] = complex(_real(entry[0], where), _real(entry[1], where))
        else:
            out[i] = _real(entry, where)
    return out.reshape(rows, cols)


def subspace_to_json(s):
    return {"ambient": s.ambient, "basis": matrix_to_json(s.basis)}


def subspace_from_json(obj, source="", tol=DEFAULT_TOL):
    ambient = _int_field(obj, "ambient", source, minimum=1)
    basis = matrix_from_json(_require(obj, "basis", source), f"{source}.basis" if source else "basis")
    if basis.shape[0] != ambient:
        raise InvalidInput(
            f"{_where(source, 'basis')} has {basis.shape[0]} rows but ambient is {ambient}"
        )
    k = basis.shape[1]
    if k <= ambient and np.linalg.norm(basis.conj().T @ basis - np.eye(k)) <= _KEEP_TOL:
        return Subspace(basis)
    return from_spanning(basis, tol)


def vector_from_json(obj, source=""):
    """A vector is a MatrixFile with a single row or column, or a plain list of reals."""
    if isinstance(obj, list):
        return np.array([_real(v, _where(source, "[]")) for v in obj], dtype=np.complex128)
    m = matrix_from_json(obj, source)
    if 1 not in m.shape:
        raise InvalidInput(f"{source or 'vector'}: expected a single row or column, got shape {m.shape}")
    return m.reshape(-1)


# ---------------------------------------------------------------------------
# reports


def _encode(value):
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            raise InvalidInput("reports must not contain NaN")
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, np.ndarray):
        obj = matrix_to_json(value)
        if value.ndim == 1:
            obj["vector"] = True
        return obj
    if isinstance(value, Subspace):
        return subspace_to_json(value)
    if dataclasses.is_dataclass(value):
        return report_to_json(value)
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _encode(v) for k, v in value.items()}
    if value is None or isinstance(value, str):
        return value
    raise InvalidInput(f"cannot serialize value of type {type(value).__name__}")


def report_to_json(report):
    """Dataclass report to a JSON-compatible dict (fields in declaration order)."""
    return {f.name: _encode(getattr(report, f.name)) for f in dataclasses.fields(report)}


def _decode(tp, value, where):
    if value is None:
        return None
    origin = typing.get_origin(tp)
    if origin is typing.Union:
        args = [a for a in typing.get_args(tp) if a is not type(None)]
        return _decode(args[0], value, where)
    if isinstance(tp, type) and issubclass(tp, Enum):
        try:
            return tp(value)
        except ValueError:
            raise InvalidInput(f"{where}: unknown value {value!r}") from None
    if tp is bool:
        if not isinstance(value, bool):
            raise InvalidInput(f"{where} must be true or false")
        return value
    if tp is float:
        if value in ("inf", "-inf"):
            return float(value)
        return _real(value, where)
    if tp is int:
        return int(value)
    if tp is np.ndarray:
        m = matrix_from_json(value, where)
        return m.reshape(-1) if value.get("vector") else m
    if tp is Subspace:
        return subspace_from_json(value, where)
    if isinstance(tp, type) and dataclasses.is_dataclass(tp):
        return report_from_json(tp, value)
    if tp is tuple or origin is tuple:
        return tuple(value)
    return value


def report_from_json(cls, obj):
    """Inverse of :func:`report_to_json` for the dataclass type ``cls``."""
    hints = typing.get_type_hints(cls)
    kwargs = {}
    for f in dataclasses.fields(cls):
        if f.name not in obj:
            raise InvalidInput(f"{_where(cls.__name__, f.name)} is missing")
        kwargs[f.name] = _decode(hints.get(f.name, object), obj[f.name], _where(cls.__name__, f.name))
    return cls(**kwargs)


# ---------------------------------------------------------------------------
# files


def load_json(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InvalidInput(f"{path}: cannot read file ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from exc


def load_matrix(path):
    return matrix_from_json(load_json(path), str(path))


def load_subspace(path, tol=DEFAULT_TOL):
    return subspace_from_json(load_json(path), str(path), tol)


def load_vector(path):
    return vector_from_json(load_json(path), str(path))


def dump(obj, path=None):
    """Write ``obj`` as strict JSON (no NaN/Infinity tokens); return the text."""
    text = json.dumps(obj, allow_nan=False, indent=2)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
