"""JSON and CSV formats, and atomic file writes."""

from __future__ import annotations

import csv
import io as _io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import ParameterError
from .linalg import SpectrumList, as_matrix
from .operators import JacobiSpec

__all__ = [
    "atomic_write", "write_json", "write_csv", "read_json",
    "matrix_to_json", "matrix_from_json", "jacobi_to_json", "jacobi_from_json",
    "spectrum_to_json", "spectrum_from_json",
]


def atomic_write(path, text: str, force: bool = False) -> Path:
    """Write ``text`` to a temporary file next to ``path`` and rename it into place."""
    path = Path(path)
    if path.exists() and not force:
        raise FileExistsError(f"{path} exists; use --force to overwrite")
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_json(path, obj, force: bool = False) -> Path:
    return atomic_write(path, json.dumps(obj, indent=2, sort_keys=True) + "\n", force)


def write_csv(path, columns, rows, force: bool = False) -> Path:
    buf = _io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: row.get(k, "") for k in columns})
    return atomic_write(path, buf.getvalue(), force)


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ParameterError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ParameterError(f"{path}: malformed JSON ({exc})") from exc


def _cplx(x):
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ParameterError(f"complex entries are [re, im] pairs, got {x!r}")
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    raise ParameterError(f"not a number: {x!r}")


def matrix_to_json(A) -> dict:
    A = np.asarray(A, dtype=complex)
    return {"type": "matrix", "re": A.real.tolist(), "im": A.imag.tolist()}


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "re" not in obj:
        raise ParameterError("matrix objects need a 're' field")
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"matrix entries must be numbers: {exc}") from exc
    if re.shape != im.shape:
        raise ParameterError("'re' and 'im' shapes differ")
    return as_matrix(re + 1j * im)


def jacobi_to_json(spec: JacobiSpec) -> dict:
    def seq(xs):
        return [[z.real, z.imag] for z in xs]
    return {"type": "jacobi", "k_min": spec.k_min, "a": seq(spec.a), "b": seq(spec.b),
            "c": seq(spec.c)}


def jacobi_from_json(obj) -> JacobiSpec:
    if not isinstance(obj, dict):
        raise ParameterError("a Jacobi spec must be a JSON object")
    try:
        k_min = int(obj["k_min"])
        a, b, c = ([_cplx(x) for x in obj[k]] for k in ("a", "b", "c"))
    except KeyError as exc:
        raise ParameterError(f"Jacobi spec is missing {exc}") from exc
    except TypeError as exc:
        raise ParameterError(f"Jacobi sequences must be lists: {exc}") from exc
    return JacobiSpec(k_min, k_min + len(b) - 1, tuple(a), tuple(b), tuple(c))


def spectrum_to_json(spec: SpectrumList) -> list:
    return spec.to_records()


def spectrum_from_json(records) -> SpectrumList:
    try:
        return SpectrumList.from_records(records)
    except (KeyError, TypeError) as exc:
        raise ParameterError(f"malformed spectrum records: {exc}") from exc
