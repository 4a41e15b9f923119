"""Maximum-likelihood graph learning from an empirical covariance.

``learn_cgl`` fits a combinatorial graph Laplacian L by minimizing
``-logdet(L + (1/N) 11^T) + tr(L S)`` over the CGL cone; ``learn_ddgl``
jointly fits L and a positive vertex-importance diagonal q by minimizing
``-logdet(L + diag(q)) + tr((L + diag(q)) S)``.

Both use block coordinate descent: exact one-dimensional updates on each
edge weight (and each q_i for the joint learner), applied through rank-one
Sherman-Morrison corrections to a maintained working inverse that is
refreshed from a Cholesky factorization at every sweep boundary.  Sweep
order is fixed (ascending vertex pairs, then ascending vertices), so runs
are deterministic.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels, _linalg
from .core import GraphModel, build_graph_model
from .errors import (
    NoProgressError,
    NotPDError,
    NotPSDError,
    NumericalError,
    SingularShiftedLError,
    ValidationError,
)

__all__ = [
    "LearnConfig",
    "LearnTrace",
    "cgl_objective",
    "ddgl_objective",
    "learn_cgl",
    "learn_ddgl",
]

# first-sweep increase beyond this relative slack signals a bug
_PROGRESS_SLACK = 1e-9


@dataclass(frozen=True)
class LearnConfig:
    """Controls for the coordinate-descent learners."""

    max_sweeps: int = 200
    obj_tol: float = 1e-7
    weight_floor: float = 1e-6
    regularizer: float = 0.0

    def __post_init__(self):
        if self.max_sweeps < 1:
            raise ValidationError("max_sweeps must be >= 1")
        if self.obj_tol <= 0:
            raise ValidationError("obj_tol must be > 0")
        if self.weight_floor < 0 or self.regularizer < 0:
            raise ValidationError("weight_floor and regularizer must be >= 0")


@dataclass(frozen=True)
class LearnTrace:
    """Objective value before the first sweep and after every sweep."""

    objective_per_sweep: list[float] = field(default_factory=list)
    converged: bool = False
    sweeps_used: int = 0


def cgl_objective(laplacian, cov) -> float:
    """-logdet(L + (1/N) 11^T) + tr(L S)."""
    lap = _linalg.check_square_sym(laplacian, "laplacian")
    s = _linalg.check_square_sym(cov, "covariance")
    n = lap.shape[0]
    shifted = lap + np.full((n, n), 1.0 / n)
    factor = _linalg.cho_factor_pd(
        shifted, err=SingularShiftedLError, msg="L + (1/N)11^T is not positive definite"
    )
    return -_linalg.chol_logdet(factor) + float(np.sum(lap * s))


def ddgl_objective(laplacian, importance, cov) -> float:
    """-logdet(L + diag(q)) + tr((L + diag(q)) S)."""
    lap = _linalg.check_square_sym(laplacian, "laplacian")
    s = _linalg.check_square_sym(cov, "covariance")
    q = np.asarray(importance, dtype=float).ravel()
    if q.size != lap.shape[0] or np.any(q <= 0):
        raise ValidationError("importance must be a positive length-N vector")
    m = lap + np.diag(q)
    factor = _linalg.cho_factor_pd(m, err=NotPDError, msg="L + diag(q) is not positive definite")
    return -_linalg.chol_logdet(factor) + float(np.sum(m * s))


def _validate_cov(cov, require_pd):
    s = _linalg.check_square_sym(cov, "covariance")
    if s.shape[0] < 2:
        raise ValidationError("covariance must be at least 2 x 2")
    lo, hi = _linalg.min_max_eigvals(s)
    if require_pd:
        if lo <= _linalg.PSD_TOL * max(hi, 0.0):
            raise NotPDError("covariance must be strictly positive definite")
    elif lo < -_linalg.PSD_TOL * max(hi, abs(lo)):
        raise NotPSDError("covariance is not PSD")
    if np.trace(s) <= 0:
        raise ValidationError("covariance must have positive trace")
    return s


def _regularized_inverse(s):
    n = s.shape[0]
    base = np.trace(s) / n
    for attempt in range(4):
        jit = base * 1e-10 * 10.0**attempt
        try:
            return _linalg.inv_pd(s + jit * np.eye(n))
        except NotPDError:
            continue
    raise NotPSDError("covariance could not be inverted even with jitter")


def _clamped_init_weights(p):
    w = np.maximum(-p, 0.0)
    np.fill_diagonal(w, 0.0)
    return _linalg.sym(w)


def _objective(m, s, offset=0.0):
    # offset subtracts the constant part of tr(M S) not belonging to L
    factor = _linalg.cho_factor_pd(
        m, err=NumericalError, msg="working operator lost positive definiteness"
    )
    return -_linalg.chol_logdet(factor) + float(np.sum(m * s)) - offset


def _descend(s, cfg, ddgl):
    """Shared coordinate-descent driver.  Returns (W, q, trace)."""
    n = s.shape[0]
    p = _regularized_inverse(s)
    w = _clamped_init_weights(p)
    deg = w.sum(axis=1)

    if ddgl:
        q = np.maximum(np.diag(p) - deg, 1e-6)
        m = -w + np.diag(deg + q)
        offset = 0.0
    else:
        q = None
        m = -w + np.diag(deg) + np.full((n, n), 1.0 / n)
        try:
            _linalg.cho_factor_pd(m)
        except NotPDError:
            # clamped initializer is disconnected; fall back to a uniform
            # complete graph at the scale optimal for S proportional to I
            w += 1.0 / np.trace(s)
            np.fill_diagonal(w, 0.0)
            deg = w.sum(axis=1)
            m = -w + np.diag(deg) + np.full((n, n), 1.0 / n)
        # tr((1/n) 11^T S) is constant; drop it so the trace counts L only
        offset = float(np.sum(s) / n)

    w = np.ascontiguousarray(w)
    m = np.ascontiguousarray(m)
    minv = np.ascontiguousarray(_linalg.inv_pd(m))
    s_diag = np.ascontiguousarray(np.diag(s))
    suu = np.ascontiguousarray(s_diag[:, None] + s_diag[None, :] - 2.0 * s)
    s_floor = 1e-14 * max(float(suu.max()), 1.0)
    q_floor = 1e-12 * float(np.max(np.diag(p)))

    objs = [_objective(m, s, offset)]
    converged = False
    sweeps = 0
    for _ in range(cfg.max_sweeps):
        sweeps += 1
        _kernels.edge_sweep(w, m, minv, suu, cfg.regularizer, s_floor)
        if ddgl:
            _kernels.importance_sweep(q, m, minv, s_diag, q_floor)
        # refresh the inverse to stop rank-one rounding drift
        minv = np.ascontiguousarray(_linalg.inv_pd(m))
        objs.append(_objective(m, s, offset))
        decrease = objs[-2] - objs[-1]
        if sweeps == 1 and decrease < -_PROGRESS_SLACK * max(1.0, abs(objs[0])):
            raise NoProgressError("first sweep increased the objective")
        if decrease <= cfg.obj_tol * max(1.0, abs(objs[-2])):
            converged = True
            break

    w = np.where(w >= cfg.weight_floor, w, 0.0)
    trace = LearnTrace(objective_per_sweep=objs, converged=converged, sweeps_used=sweeps)
    return w, q, trace


def learn_cgl(cov, cfg: LearnConfig | None = None) -> tuple[GraphModel, LearnTrace]:
    """Fit a combinatorial graph Laplacian to a PSD covariance.

    Initializes from the clamped off-diagonals of a jitter-regularized
    inverse of the covariance, then runs edge-weight coordinate descent.
    Edge weights below ``cfg.weight_floor`` are zeroed in the returned model.
    """
    cfg = cfg or LearnConfig()
    s = _validate_cov(cov, require_pd=False)
    w, _, trace = _descend(s, cfg, ddgl=False)
    return build_graph_model(w), trace


def learn_ddgl(cov, cfg: LearnConfig | None = None) -> tuple[GraphModel, LearnTrace]:
    """Jointly fit a CGL and positive vertex importances to a PD covariance.

    Alternates edge-weight and importance coordinate updates; at an interior
    optimum the learned L + diag(q) equals the inverse covariance whenever
    that inverse is itself feasible (nonpositive off-diagonals, positive
    row sums).
    """
    cfg = cfg or LearnConfig()
    s = _validate_cov(cov, require_pd=True)
    w, q, trace = _descend(s, cfg, ddgl=True)
    return build_graph_model(w, vertex_importance=q), trace
