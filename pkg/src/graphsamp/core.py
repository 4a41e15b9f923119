"""Core graph and sampling-set types.

All types are immutable after construction and all operations are pure
functions, so values can be shared freely across threads.  Vertex indices
are 0-based everywhere, including the file formats in :mod:`graphsamp.io`.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _linalg
from .errors import (
    IndexOutOfRangeError,
    NegativeWeightError,
    NonPositiveImportanceError,
    NonzeroDiagonalError,
    NotPSDError,
    ValidationError,
)

__all__ = [
    "GraphModel",
    "SamplingSet",
    "build_graph_model",
    "sampling_operator",
    "pinv_psd",
]


def _frozen(a):
    a = np.ascontiguousarray(a, dtype=a.dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GraphModel:
    """Undirected weighted graph with its combinatorial Laplacian.

    ``vertex_importance`` (when present) is the positive diagonal q that
    turns the Laplacian into the positive-definite operator L + diag(q).
    """

    adjacency: np.ndarray
    degrees: np.ndarray
    laplacian: np.ndarray
    vertex_importance: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    def operator(self, use_importance: bool = False) -> np.ndarray:
        """Graph operator for reconstruction/sampling: L or L + diag(q)."""
        if not use_importance:
            return self.laplacian
        if self.vertex_importance is None:
            from .errors import MissingImportanceError

            raise MissingImportanceError("model has no vertex importance")
        return self.laplacian + np.diag(self.vertex_importance)


@dataclass(frozen=True)
class SamplingSet:
    """Ordered set of selected vertices with optional per-selection scores."""

    indices: np.ndarray
    scores: np.ndarray | None = None
    method: str = ""

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64).ravel()
        if idx.size and len(np.unique(idx)) != idx.size:
            raise ValidationError("sampling set indices must be distinct")
        if idx.size and idx.min() < 0:
            raise IndexOutOfRangeError("negative vertex index")
        object.__setattr__(self, "indices", _frozen(idx))
        if self.scores is not None:
            sc = np.asarray(self.scores, dtype=float).ravel()
            if sc.size != idx.size:
                raise ValidationError("scores must align with indices")
            object.__setattr__(self, "scores", _frozen(sc))

    def __len__(self) -> int:
        return int(self.indices.size)


def _as_indices(sset, n):
    """Accept a SamplingSet or a plain index sequence; validate against n."""
    idx = sset.indices if isinstance(sset, SamplingSet) else np.asarray(sset, dtype=np.int64).ravel()
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise IndexOutOfRangeError(f"vertex index outside [0, {n})")
    if idx.size and len(np.unique(idx)) != idx.size:
        raise ValidationError("sampling set indices must be distinct")
    return idx


def build_graph_model(adjacency, vertex_importance=None) -> GraphModel:
    """Build a validated GraphModel from a symmetric adjacency matrix.

    The Laplacian is D - A with D the diagonal degree matrix, which makes it
    symmetric PSD with zero row sums by construction.
    """
    a = _linalg.check_square_sym(adjacency, "adjacency")
    if np.any(a < 0):
        raise NegativeWeightError("adjacency has negative entries")
    if np.any(np.diag(a) != 0):
        raise NonzeroDiagonalError("adjacency diagonal must be zero")
    deg = a.sum(axis=1)
    lap = np.diag(deg) - a
    q = None
    if vertex_importance is not None:
        q = np.asarray(vertex_importance, dtype=float).ravel()
        if q.size != a.shape[0]:
            raise ValidationError("vertex importance length mismatch")
        if not np.all(np.isfinite(q)) or np.any(q <= 0):
            raise NonPositiveImportanceError("vertex importances must be > 0")
        q = _frozen(q)
    return GraphModel(
        adjacency=_frozen(a),
        degrees=_frozen(deg),
        laplacian=_frozen(lap),
        vertex_importance=q,
    )


def sampling_operator(sset, n: int) -> np.ndarray:
    """Diagonal 0/1 matrix H with H_ii = 1 iff vertex i is selected."""
    idx = _as_indices(sset, n)
    h = np.zeros((n, n))
    h[idx, idx] = 1.0
    return h


def pinv_psd(m, rank_tol: float = 1e-12) -> np.ndarray:
    """Moore-Penrose pseudo-inverse of a symmetric PSD matrix.

    Uses an eigendecomposition; eigenvalues below ``rank_tol`` times the
    largest eigenvalue are treated as exact zeros.
    """
    m = _linalg.check_square_sym(m, "matrix")
    w, v = np.linalg.eigh(m)
    top = max(float(w[-1]), 0.0)
    if w[0] < -_linalg.PSD_TOL * max(top, abs(float(w[0]))):
        raise NotPSDError("matrix has a significantly negative eigenvalue")
    inv_w = np.where(w > rank_tol * top, 1.0 / np.where(w > 0, w, 1.0), 0.0)
    return _linalg.sym((v * inv_w) @ v.T)
