"""Shared dense symmetric linear-algebra helpers (Cholesky-based)."""

import numpy as np
import scipy.linalg as sla

from .errors import NotPDError, SolveFailureError

# relative eigenvalue tolerance used for all PSD checks
PSD_TOL = 1e-8


def sym(a):
    """Exactly symmetrize a square matrix."""
    return 0.5 * (a + a.T)


def check_square_sym(a, name="matrix", tol=1e-10):
    """Validate a dense symmetric real matrix and return a symmetrized copy."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        from .errors import ValidationError

        raise ValidationError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        from .errors import ValidationError

        raise ValidationError(f"{name} contains non-finite entries")
    scale = np.max(np.abs(a)) if a.size else 0.0
    if scale > 0 and np.max(np.abs(a - a.T)) > tol * scale:
        from .errors import ValidationError

        raise ValidationError(f"{name} is not symmetric within tolerance")
    return sym(a)


def min_max_eigvals(a):
    # normalize before LAPACK: tiny-magnitude matrices hit denormal stalls
    scale = float(np.max(np.abs(a))) or 1.0
    w = np.linalg.eigvalsh(a / scale)
    return float(w[0] * scale), float(w[-1] * scale)


def is_psd(a, tol=PSD_TOL):
    lo, hi = min_max_eigvals(a)
    return lo >= -tol * max(hi, 0.0, abs(lo))


def cho_factor_pd(a, err=NotPDError, msg="matrix is not positive definite"):
    """Cholesky factor of a PD matrix, raising ``err`` on failure."""
    try:
        return sla.cho_factor(a, lower=True, check_finite=False)
    except sla.LinAlgError as exc:
        raise err(msg) from exc


def chol_solve(factor, b):
    try:
        return sla.cho_solve(factor, b, check_finite=False)
    except sla.LinAlgError as exc:  # pragma: no cover - cho_solve rarely fails
        raise SolveFailureError("triangular solve failed") from exc


def chol_logdet(factor):
    """log det from the diagonal of a Cholesky factor."""
    c, _ = factor
    return 2.0 * float(np.sum(np.log(np.diag(c))))


def inv_pd(a, err=NotPDError, msg="matrix is not positive definite"):
    """Inverse of a PD matrix via Cholesky; result exactly symmetric."""
    scale = float(np.max(np.abs(a))) or 1.0
    f = cho_factor_pd(a / scale, err=err, msg=msg)
    return sym(chol_solve(f, np.eye(a.shape[0]))) / scale
