"""Stable file formats: CSV for numeric arrays, JSON for structured objects.

Matrices are written as N rows of comma-separated decimals with 17
significant digits, so float64 values round-trip exactly.  Graphs are JSON
objects ``{"n": N, "edges": [[i, j, w], ...], "q": [...]}`` with 0-based
vertex ids and each undirected edge listed once (i < j).  All writes are
atomic (temp file in the target directory, then rename).
"""

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .core import GraphModel, SamplingSet, build_graph_model
from .errors import ValidationError
from .synthdata import NodeLayout, SignalBatch

__all__ = [
    "atomic_write_text",
    "write_matrix_csv",
    "read_matrix_csv",
    "write_signals_csv",
    "read_signals_csv",
    "write_graph_json",
    "read_graph_json",
    "write_set_json",
    "read_set_json",
    "write_layout_json",
    "read_layout_json",
]

_FMT = "%.17g"


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _array_csv(a) -> str:
    a = np.atleast_2d(np.asarray(a, dtype=float))
    return "\n".join(",".join(_FMT % v for v in row) for row in a) + "\n"


def write_matrix_csv(path, matrix) -> None:
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError("matrix CSV requires a square array")
    atomic_write_text(path, _array_csv(m))


def read_matrix_csv(path) -> np.ndarray:
    m = np.loadtxt(path, delimiter=",", ndmin=2)
    if m.shape[0] != m.shape[1]:
        raise ValidationError(f"{path}: expected a square matrix, got {m.shape}")
    return m


def write_signals_csv(path, signals) -> None:
    atomic_write_text(path, _array_csv(signals))


def read_signals_csv(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", ndmin=2)


def write_graph_json(path, model: GraphModel) -> None:
    iu, ju = np.triu_indices(model.n, k=1)
    w = model.adjacency[iu, ju]
    nz = w != 0
    payload = {
        "n": model.n,
        "edges": [[int(i), int(j), float(v)] for i, j, v in zip(iu[nz], ju[nz], w[nz])],
    }
    if model.vertex_importance is not None:
        payload["q"] = [float(v) for v in model.vertex_importance]
    atomic_write_text(path, json.dumps(payload) + "\n")


def read_graph_json(path) -> GraphModel:
    with open(path) as fh:
        payload = json.load(fh)
    try:
        n = int(payload["n"])
        edges = payload.get("edges", [])
        q = payload.get("q")
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"{path}: malformed graph JSON") from exc
    adj = np.zeros((n, n))
    for entry in edges:
        i, j, w = int(entry[0]), int(entry[1]), float(entry[2])
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise ValidationError(f"{path}: bad edge ({i}, {j})")
        adj[i, j] = w
        adj[j, i] = w
    return build_graph_model(adj, vertex_importance=q)


def write_set_json(path, sset: SamplingSet) -> None:
    payload = {"method": sset.method, "indices": [int(i) for i in sset.indices]}
    if sset.scores is not None:
        payload["scores"] = [float(s) for s in sset.scores]
    atomic_write_text(path, json.dumps(payload) + "\n")


def read_set_json(path) -> SamplingSet:
    with open(path) as fh:
        payload = json.load(fh)
    return SamplingSet(
        np.asarray(payload["indices"], dtype=np.int64),
        np.asarray(payload["scores"], dtype=float) if "scores" in payload else None,
        method=payload.get("method", ""),
    )


def write_layout_json(path, layout: NodeLayout) -> None:
    payload = {
        "n": layout.n,
        "seed": layout.seed,
        "points": [[float(x), float(y)] for x, y in layout.points],
    }
    atomic_write_text(path, json.dumps(payload) + "\n")


def read_layout_json(path) -> NodeLayout:
    with open(path) as fh:
        payload = json.load(fh)
    return NodeLayout(points=np.asarray(payload["points"], dtype=float), seed=int(payload["seed"]))
