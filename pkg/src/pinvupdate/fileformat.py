"""
Matrix files and run reports.

A matrix file is a JSON object::

    {"name": "A", "rows": 2, "cols": 2,
     "data": [[1.0, 0.0], [0.5, -2.0], [0.0, 0.0], [3.0, 0.0]]}

``data`` holds ``rows * cols`` ``[re, im]`` pairs in row-major order; ``name``
is optional. Files ending in ``.csv`` are read as real matrices, one row per
line. Report scalars are decimal strings with 17 significant digits so that
every double survives a round trip.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "MatrixFormatError",
    "dec",
    "undec",
    "matrix_to_dict",
    "matrix_from_dict",
    "read_matrix",
    "write_matrix",
    "checksum",
    "RunReport",
]


class MatrixFormatError(ValueError):
    pass


def dec(x):
    """Float to a 17-significant-digit decimal string."""
    return format(float(x), ".17g")


def undec(s):
    return float(s)


def matrix_to_dict(M, name=None):
    M = np.asarray(M, dtype=np.complex128)
    d = {}
    if name is not None:
        d["name"] = name
    d["rows"], d["cols"] = (int(v) for v in M.shape)
    d["data"] = [[float(z.real), float(z.imag)] for z in M.ravel()]
    return d


def matrix_from_dict(d):
    try:
        rows, cols, data = int(d["rows"]), int(d["cols"]), d["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixFormatError(f"matrix object needs rows, cols and data: {exc}") from exc
    if rows < 0 or cols < 0:
        raise MatrixFormatError("rows and cols must be nonnegative")
    if len(data) != rows * cols:
        raise MatrixFormatError(f"data has {len(data)} entries, expected {rows * cols}")
    try:
        vals = [complex(float(re), float(im)) for re, im in data]
    except (TypeError, ValueError) as exc:
        raise MatrixFormatError(f"entries must be [re, im] pairs: {exc}") from exc
    M = np.array(vals, dtype=np.complex128).reshape(rows, cols)
    if not np.all(np.isfinite(M)):
        raise MatrixFormatError("non-finite entry")
    return M


def _read_csv(path):
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([float(cell) for cell in line.split(",")])
        except ValueError as exc:
            raise MatrixFormatError(f"{path}: {exc}") from exc
    if not rows or len({len(r) for r in rows}) != 1:
        raise MatrixFormatError(f"{path}: empty or ragged CSV")
    M = np.array(rows, dtype=np.complex128)
    if not np.all(np.isfinite(M)):
        raise MatrixFormatError(f"{path}: non-finite entry")
    return M


def read_matrix(path):
    """Load a matrix file; returns ``(matrix, name)``."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return _read_csv(path), path.stem
    try:
        d = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(d, dict):
        raise MatrixFormatError(f"{path}: expected a JSON object")
    return matrix_from_dict(d), d.get("name", path.stem)


def write_matrix(path, M, name=None):
    Path(path).write_text(json.dumps(matrix_to_dict(M, name), indent=1) + "\n")


def checksum(M):
    """SHA-256 of the canonical row-major ``[re, im]`` serialization."""
    d = matrix_to_dict(M)
    blob = json.dumps([d["rows"], d["cols"], d["data"]], separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _dec_or_none(x):
    return None if x is None else dec(x)


@dataclass
class RunReport:
    """Everything one CLI invocation produced, in serializable form."""

    command: str
    inputs: list[dict]
    conditions: dict | None = None
    rank_conditions: list[bool] | None = None
    formula_used: str | None = None
    pseudoinverse: dict | None = None
    penrose: list[str] | None = None
    oracle_deviation: str | None = None
    warnings: list[str] = field(default_factory=list)
    intermediates: dict[str, dict] = field(default_factory=dict)
    wall_time: str = "0"

    @staticmethod
    def describe_input(M, name, path):
        return {
            "name": name,
            "path": str(path),
            "rows": int(M.shape[0]),
            "cols": int(M.shape[1]),
            "sha256": checksum(M),
        }

    @staticmethod
    def encode_conditions(report):
        out = {}
        for key, val in report.to_dict().items():
            if isinstance(val, bool):
                out[key] = val
            elif isinstance(val, list):
                out[key] = [dec(v) for v in val]
            else:
                out[key] = dec(val)
        return out

    @staticmethod
    def decode_conditions(d):
        """Inverse of :meth:`encode_conditions`, back to floats."""
        out = {}
        for key, val in d.items():
            if isinstance(val, bool):
                out[key] = val
            elif isinstance(val, list):
                out[key] = [undec(v) for v in val]
            else:
                out[key] = undec(val)
        return out

    @classmethod
    def from_update(cls, result, inputs, wall_time):
        return cls(
            command="update",
            inputs=inputs,
            conditions=cls.encode_conditions(result.report),
            formula_used=result.formula_used.value,
            pseudoinverse=matrix_to_dict(result.pseudoinverse, "pinv(A - XY*)"),
            penrose=[dec(v) for v in result.penrose],
            oracle_deviation=_dec_or_none(result.oracle_deviation),
            warnings=list(result.warnings),
            intermediates={k: matrix_to_dict(v, k) for k, v in sorted(result.intermediates.items())},
            wall_time=dec(wall_time),
        )

    def to_json(self):
        return json.dumps(asdict(self), indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text):
        return cls(**json.loads(text))

    def without_timing(self):
        d = asdict(self)
        d.pop("wall_time")
        return d
