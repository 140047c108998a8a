"""
JSON state documents.

Exactly one of:

    {"matrix": [[[re, im], ...4], ...4]}
    {"fano": {"p1": [x, y, z], "p2": [x, y, z], "m": [[...3], ...3]}}
    {"d7": {"p1z": .., "p2z": .., "mxx": .., "myy": .., "mxy": .., "myx": .., "mzz": ..}}
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from qcmm.core.state_core import D7Params, DensityMatrix4, FanoParams, fano_matrix
from qcmm.errors import StateParseError

STATE_KEYS = ("matrix", "fano", "d7")


@dataclass(frozen=True)
class ParsedState:
    """A parsed document: the matrix plus whichever parametrisation it came in."""

    kind: str
    matrix: DensityMatrix4
    fano: Optional[FanoParams] = None
    d7: Optional[D7Params] = None


def _number(value, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise StateParseError(f"expected a number, got {value!r}", field=field)
    value = float(value)
    if not math.isfinite(value):
        raise StateParseError("number must be finite", field=field)
    return value


def _vector(value, field: str, n: int) -> list:
    if not isinstance(value, list) or len(value) != n:
        raise StateParseError(f"expected a list of {n} numbers", field=field)
    return [_number(v, f"{field}[{i}]") for i, v in enumerate(value)]


def _parse_matrix(value) -> DensityMatrix4:
    if not isinstance(value, list) or len(value) != 4:
        raise StateParseError("expected 4 rows", field="matrix")
    entries = np.empty((4, 4), dtype=complex)
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != 4:
            raise StateParseError("expected 4 entries", field=f"matrix[{i}]")
        for j, pair in enumerate(row):
            re, im = _vector(pair, f"matrix[{i}][{j}]", 2)
            entries[i, j] = complex(re, im)
    return DensityMatrix4(entries)


def _parse_fano(value) -> FanoParams:
    if not isinstance(value, dict):
        raise StateParseError("expected an object with p1, p2, m", field="fano")
    missing = [k for k in ("p1", "p2", "m") if k not in value]
    if missing:
        raise StateParseError(f"missing keys {missing}", field="fano")
    m = value["m"]
    if not isinstance(m, list) or len(m) != 3:
        raise StateParseError("expected a 3x3 list", field="fano.m")
    return FanoParams(
        _vector(value["p1"], "fano.p1", 3),
        _vector(value["p2"], "fano.p2", 3),
        [_vector(row, f"fano.m[{i}]", 3) for i, row in enumerate(m)],
    )


def _parse_d7(value) -> D7Params:
    if not isinstance(value, dict):
        raise StateParseError("expected an object", field="d7")
    unknown = sorted(set(value) - set(D7Params.FIELDS))
    if unknown:
        raise StateParseError(f"unknown keys {unknown}", field="d7")
    missing = [k for k in D7Params.FIELDS if k not in value]
    if missing:
        raise StateParseError(f"missing keys {missing}", field="d7")
    return D7Params(**{k: _number(value[k], f"d7.{k}") for k in D7Params.FIELDS})


def parse_state(text: str) -> ParsedState:
    """Parse a JSON state document. The matrix is built without a positivity gate."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise StateParseError(f"malformed JSON: {e.msg} (column {e.colno})", line=e.lineno) from e
    if not isinstance(doc, dict):
        raise StateParseError("top level must be an object")
    present = [k for k in STATE_KEYS if k in doc]
    if len(present) != 1:
        raise StateParseError(f"expected exactly one of {list(STATE_KEYS)}, found {present or 'none'}")
    kind = present[0]
    if kind == "matrix":
        return ParsedState(kind, _parse_matrix(doc["matrix"]))
    if kind == "fano":
        fano = _parse_fano(doc["fano"])
        return ParsedState(kind, fano_matrix(fano), fano=fano)
    d7 = _parse_d7(doc["d7"])
    return ParsedState(kind, fano_matrix(d7.to_fano()), fano=d7.to_fano(), d7=d7)


def read_state(path: Union[str, Path]) -> ParsedState:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise StateParseError(f"cannot read {path}: {e}") from e
    return parse_state(text)


def matrix_to_json(rho: DensityMatrix4) -> dict:
    """Inverse of the "matrix" form."""
    return {"matrix": [[[float(z.real), float(z.imag)] for z in row] for row in rho.entries]}
