"""JSON forms of matrices, relations and singular spectra.

A complex matrix is ``{"rows", "cols", "re", "im"}`` with row-major nested
lists.  A relation is ``{"dim_x", "dim_y", "graph_basis"}``; the basis is
re-orthonormalized on load, so any spanning set of columns is accepted.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import subspace as sp
from .errors import InvalidInput
from .relation import LinearRelation
from .schatten import SingularSpectrum


def matrix_to_json(m) -> dict:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise InvalidInput("expected a 2-d matrix")
    return {"rows": a.shape[0], "cols": a.shape[1],
            "re": a.real.tolist(), "im": a.imag.tolist()}


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        re = np.asarray(obj["re"], dtype=float).reshape(rows, cols)
        im = np.asarray(obj.get("im", np.zeros((rows, cols))), dtype=float).reshape(rows, cols)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed matrix JSON: {exc}") from exc
    m = re + 1j * im
    if not np.all(np.isfinite(m)):
        raise InvalidInput("matrix has non-finite entries")
    return m


def relation_to_json(t: LinearRelation) -> dict:
    return {"dim_x": t.dim_x, "dim_y": t.dim_y, "graph_basis": matrix_to_json(t.graph.basis)}


def relation_from_json(obj: dict, tol=None) -> LinearRelation:
    try:
        dx, dy = int(obj["dim_x"]), int(obj["dim_y"])
        basis = matrix_from_json(obj["graph_basis"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed relation JSON: {exc}") from exc
    if dx < 1 or dy < 1 or basis.shape[0] != dx + dy:
        raise InvalidInput(f"graph basis has {basis.shape[0]} rows, expected {dx + dy}")
    return LinearRelation(dx, dy, sp.span(basis, tol))


def spectrum_to_json(s: SingularSpectrum) -> dict:
    return s.to_dict()


def load_relation(path, tol=None) -> LinearRelation:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: not valid JSON ({exc})") from exc
    return relation_from_json(obj, tol)


def save_relation(t: LinearRelation, path) -> None:
    Path(path).write_text(json.dumps(relation_to_json(t)) + "\n")
