"""On-disk cache for boundary matrices.

Layout: `{cache_dir}/{complex-hash}/d{degree}.mtx` holding a sparse triplet
text ("rows cols nnz" header, then one "row col value" line per entry,
0-based indices, canonical cell order) plus a JSON sidecar `d{degree}.json`
with the complex description, the canonical cell list of the column degree,
and a content digest of the triplet file.  Files are written atomically via
temp-file rename.  The complex hash folds in the sign-convention descriptor,
so changing conventions invalidates everything.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from typing import Optional

from .cells import CONVENTIONS, ComplexSpec, enumerate_cells, format_cell

SCHEMA = 1

ENV_CACHE_DIR = "STRIPCONF_CACHE_DIR"


def default_cache_dir() -> Optional[str]:
    return os.environ.get(ENV_CACHE_DIR) or None


def complex_hash(spec: ComplexSpec) -> str:
    payload = f"schema={SCHEMA};{spec.describe()};{CONVENTIONS}"
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _paths(cache_dir: str, spec: ComplexSpec, degree: int):
    base = os.path.join(cache_dir, complex_hash(spec))
    return base, os.path.join(base, f"d{degree}.mtx"), os.path.join(base, f"d{degree}.json")


def _render(mat) -> str:
    lines = [f"{mat.rows} {mat.cols} {len(mat.triplets)}"]
    for r, c, v in mat.triplets:
        lines.append(f"{r} {c} {v}")
    return "\n".join(lines) + "\n"


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(path)
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def store_matrix(cache_dir: str, spec: ComplexSpec, degree: int, mat) -> None:
    _, mtx_path, json_path = _paths(cache_dir, spec, degree)
    body = _render(mat)
    sidecar = {
        "schema": SCHEMA,
        "spec": spec.describe(),
        "conventions": CONVENTIONS,
        "degree": degree,
        "rows": mat.rows,
        "cols": mat.cols,
        "cells": [format_cell(c) for c in enumerate_cells(spec, degree)],
        "digest": hashlib.sha256(body.encode()).hexdigest(),
    }
    _atomic_write(mtx_path, body)
    _atomic_write(json_path, json.dumps(sidecar, indent=1))


def load_matrix(cache_dir: str, spec: ComplexSpec, degree: int):
    from .chains import BoundaryMatrix

    _, mtx_path, json_path = _paths(cache_dir, spec, degree)
    if not (os.path.exists(mtx_path) and os.path.exists(json_path)):
        return None
    try:
        with open(json_path) as fh:
            sidecar = json.load(fh)
        with open(mtx_path) as fh:
            body = fh.read()
    except (OSError, json.JSONDecodeError):
        return None
    if sidecar.get("schema") != SCHEMA or sidecar.get("spec") != spec.describe():
        return None
    if sidecar.get("conventions") != CONVENTIONS:
        return None
    if sidecar.get("digest") != hashlib.sha256(body.encode()).hexdigest():
        return None
    lines = body.strip().splitlines()
    rows, cols, nnz = (int(x) for x in lines[0].split())
    trips = []
    for line in lines[1:]:
        r, c, v = line.split()
        trips.append((int(r), int(c), int(v)))
    if len(trips) != nnz:
        return None
    return BoundaryMatrix(spec, degree, rows, cols, tuple(trips))
