"""Graph-Laplacian-regularized reconstruction and its error covariance.

Reconstruction solves ``(H + mu * Omega) f = I_S y_S`` with a symmetric
positive-definite factorization (never an explicit inverse).  Under the
unit-variance noise convention, the exact error covariance is
``B^-1 - (mu - mu^2) B^-1 Omega B^-1`` with ``B = H + mu * Omega``; for
small mu it is approximated by ``(H + gamma * Omega)^-1`` with
``gamma = 2 mu - mu^2`` (a first-order Neumann truncation).
"""

from dataclasses import dataclass

import numpy as np

from . import _linalg
from .core import _as_indices
from .errors import NotPDError, SolveFailureError, ValidationError

__all__ = [
    "ReconstructionProblem",
    "gamma_from_mu",
    "glr_reconstruct",
    "error_covariance_exact",
    "error_covariance_approx",
    "covariance_gap",
    "doptimal_objective",
]


def gamma_from_mu(mu: float) -> float:
    """Effective regularization 2*mu - mu^2 of the approximate covariance."""
    if mu <= 0:
        raise ValidationError("mu must be > 0")
    return 2.0 * mu - mu * mu


@dataclass(frozen=True)
class ReconstructionProblem:
    """One GLR reconstruction instance: operator, sampling set, mu, samples."""

    omega: np.ndarray
    sampling_set: object
    mu: float
    observations: np.ndarray

    def __post_init__(self):
        om = _linalg.check_square_sym(self.omega, "operator")
        object.__setattr__(self, "omega", om)
        if self.mu <= 0:
            raise ValidationError("mu must be > 0")
        idx = _as_indices(self.sampling_set, om.shape[0])
        if idx.size == 0:
            raise ValidationError("sampling set must be nonempty")
        y = np.asarray(self.observations, dtype=float).ravel()
        if y.size != idx.size:
            raise ValidationError("observations must have one value per selected vertex")
        object.__setattr__(self, "observations", y)


def _system_matrix(omega, indices, mu):
    b = mu * omega
    b = b.copy()
    b[indices, indices] += 1.0
    return b


def _factor(b):
    return _linalg.cho_factor_pd(b, err=SolveFailureError, msg="H + mu*Omega factorization failed")


def glr_reconstruct(problem: ReconstructionProblem) -> np.ndarray:
    """Closed-form GLR solution (H + mu*Omega)^-1 I_S y_S."""
    idx = _as_indices(problem.sampling_set, problem.omega.shape[0])
    b = _system_matrix(problem.omega, idx, problem.mu)
    rhs = np.zeros(problem.omega.shape[0])
    rhs[idx] = problem.observations
    return _linalg.chol_solve(_factor(b), rhs)


def error_covariance_exact(omega, sampling_set, mu: float) -> np.ndarray:
    """B^-1 - (mu - mu^2) B^-1 Omega B^-1 under unit-variance noise."""
    om = _linalg.check_square_sym(omega, "operator")
    if mu <= 0:
        raise ValidationError("mu must be > 0")
    idx = _as_indices(sampling_set, om.shape[0])
    binv = _linalg.sym(_linalg.chol_solve(_factor(_system_matrix(om, idx, mu)), np.eye(om.shape[0])))
    return _linalg.sym(binv - (mu - mu * mu) * (binv @ om @ binv))


def error_covariance_approx(omega, sampling_set, mu: float) -> np.ndarray:
    """(H + gamma*Omega)^-1 with gamma = 2*mu - mu^2."""
    om = _linalg.check_square_sym(omega, "operator")
    gamma = gamma_from_mu(mu)
    idx = _as_indices(sampling_set, om.shape[0])
    b = gamma * om
    b[idx, idx] += 1.0
    return _linalg.sym(_linalg.chol_solve(_factor(b), np.eye(om.shape[0])))


def covariance_gap(omega, sampling_set, mu: float) -> float:
    """Frobenius gap between the exact and approximate error covariances."""
    exact = error_covariance_exact(omega, sampling_set, mu)
    approx = error_covariance_approx(omega, sampling_set, mu)
    return float(np.linalg.norm(exact - approx))


def doptimal_objective(omega, sampling_set, gamma: float) -> float:
    """-logdet(H + gamma*Omega) from a Cholesky factorization."""
    om = _linalg.check_square_sym(omega, "operator")
    if gamma <= 0:
        raise ValidationError("gamma must be > 0")
    idx = _as_indices(sampling_set, om.shape[0])
    b = gamma * om
    b[idx, idx] += 1.0
    factor = _linalg.cho_factor_pd(b, err=NotPDError, msg="H + gamma*Omega is not positive definite")
    return -_linalg.chol_logdet(factor)
