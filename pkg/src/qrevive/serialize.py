"""Deterministic JSON/CSV emission.

Complex matrices serialize as row-major arrays of [re, im] pairs (lossless
regression snapshots); CSV carries rounded scalar observables for plotting.
Identical (config, seed) pairs must produce byte-identical files, so keys
are sorted, line endings are LF, and no timestamps are embedded.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .states import DensityMatrix

CSV_DECIMALS = 12


def matrix_to_pairs(m: np.ndarray) -> list[list[float]]:
    m = np.asarray(m, dtype=complex)
    return [[float(z.real), float(z.imag)] for z in m.reshape(-1)]


def pairs_to_matrix(entries, rows: int, cols: int | None = None) -> np.ndarray:
    cols = rows if cols is None else cols
    flat = np.array([complex(re, im) for re, im in entries])
    return flat.reshape(rows, cols)


def state_to_json(rho: DensityMatrix) -> dict:
    return {"dims": list(rho.dims), "entries": matrix_to_pairs(rho.matrix)}


def state_from_json(obj) -> DensityMatrix:
    dims = tuple(obj["dims"])
    d = int(np.prod(dims))
    return DensityMatrix(pairs_to_matrix(obj["entries"], d), dims)


def dump_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def write_json(path, payload) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_json(payload), encoding="utf-8", newline="\n")
    return path


def format_csv_value(v) -> str:
    if isinstance(v, bool) or isinstance(v, np.bool_):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(round(float(v), CSV_DECIMALS))
    return str(v)


def write_csv(path, header: list[str], rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    lines += [",".join(format_csv_value(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path
