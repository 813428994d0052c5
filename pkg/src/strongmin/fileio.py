"""JSON serialization of system quadruples and reports.

Quadruple files carry a ``schema`` version, the three dimensions, and the
eight coefficient matrices as flat row-major arrays of ``[re, im]`` pairs.
Serialization is deterministic: keys are sorted and floats use shortest
round-trip formatting, so identical data produces byte-identical files.
"""
from __future__ import annotations

import hashlib
import json

import numpy as np

from .pencil import Pencil, SystemQuadruple

SCHEMA_VERSION = 1

_BLOCKS = ("A0", "A1", "B0", "B1", "C0", "C1", "D0", "D1")


class QuadrupleFormatError(ValueError):
    """Malformed quadruple file."""


def _flatten(M: np.ndarray) -> list:
    out = []
    for v in M.reshape(-1):
        out.append([float(v.real), float(v.imag)])
    return out


def _unflatten(data, rows, cols, name):
    if not isinstance(data, list):
        raise QuadrupleFormatError(f"{name}: expected a list of [re, im] pairs")
    if len(data) != rows * cols:
        raise QuadrupleFormatError(
            f"{name}: expected {rows * cols} entries, got {len(data)}"
        )
    out = np.zeros((rows, cols), dtype=complex)
    for k, pair in enumerate(data):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise QuadrupleFormatError(f"{name}[{k}]: expected an [re, im] pair")
        re, im = pair
        if not all(isinstance(x, (int, float)) for x in (re, im)):
            raise QuadrupleFormatError(f"{name}[{k}]: non-numeric entry")
        if not (np.isfinite(re) and np.isfinite(im)):
            raise QuadrupleFormatError(f"{name}[{k}]: non-finite entry")
        out[k // cols, k % cols] = complex(re, im)
    return out


def quadruple_to_dict(q: SystemQuadruple) -> dict:
    d, m, n = q.d, q.m, q.n
    blocks = {
        "A0": q.A.L0, "A1": q.A.L1,
        "B0": q.B.L0, "B1": q.B.L1,
        "C0": q.C.L0, "C1": q.C.L1,
        "D0": q.D.L0, "D1": q.D.L1,
    }
    doc = {"schema": SCHEMA_VERSION, "d": d, "m": m, "n": n}
    for name in _BLOCKS:
        doc[name] = _flatten(blocks[name])
    return doc


def quadruple_from_dict(doc: dict) -> SystemQuadruple:
    for field in ("schema", "d", "m", "n"):
        if field not in doc:
            raise QuadrupleFormatError(f"missing field {field!r}")
    if doc["schema"] != SCHEMA_VERSION:
        raise QuadrupleFormatError(f"unsupported schema {doc['schema']!r}")
    d, m, n = doc["d"], doc["m"], doc["n"]
    for name, value in (("d", d), ("m", m), ("n", n)):
        if not isinstance(value, int) or value < 0:
            raise QuadrupleFormatError(f"{name}: expected a nonnegative integer")
    shapes = {
        "A0": (d, d), "A1": (d, d),
        "B0": (d, n), "B1": (d, n),
        "C0": (m, d), "C1": (m, d),
        "D0": (m, n), "D1": (m, n),
    }
    grids = {}
    for name in _BLOCKS:
        if name not in doc:
            raise QuadrupleFormatError(f"missing block {name!r}")
        grids[name] = _unflatten(doc[name], *shapes[name], name)
    return SystemQuadruple(
        Pencil(grids["A0"], grids["A1"]),
        Pencil(grids["B0"], grids["B1"]),
        Pencil(grids["C0"], grids["C1"]),
        Pencil(grids["D0"], grids["D1"]),
    )


def dumps_deterministic(doc) -> str:
    """Deterministic JSON text (sorted keys, shortest round-trip floats)."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), allow_nan=False)


def write_quadruple(path, q: SystemQuadruple) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_deterministic(quadruple_to_dict(q)))
        fh.write("\n")


def parse_quadruple(path) -> SystemQuadruple:
    """Read and validate a quadruple file.

    NaN/Infinity literals are rejected at the JSON level; shape and
    finiteness violations name the offending block.
    """
    with open(path) as fh:
        text = fh.read()

    def _reject(token):
        raise QuadrupleFormatError(f"non-finite literal {token!r} in file")

    try:
        doc = json.loads(text, parse_constant=_reject)
    except json.JSONDecodeError as exc:
        raise QuadrupleFormatError(f"invalid JSON: {exc}") from exc
    return quadruple_from_dict(doc)


def file_digest(path) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def matrix_to_pairs(M: np.ndarray) -> list:
    return _flatten(np.asarray(M, dtype=complex))


def pencil_to_dict(P: Pencil) -> dict:
    return {
        "rows": P.rows,
        "cols": P.cols,
        "L0": _flatten(P.L0),
        "L1": _flatten(P.L1),
    }
