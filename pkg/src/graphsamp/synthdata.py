"""Synthetic experiment inputs: node geometry, Gaussian-process covariance,
signal realizations, observation noise, and empirical covariance.

Every generator is a pure function of its arguments and seed.
"""

from dataclasses import dataclass

import numpy as np

from . import _linalg, rng
from .errors import (
    BadSizeError,
    DegenerateRangeError,
    EmptyBatchError,
    NotPSDError,
    ValidationError,
)

__all__ = [
    "NodeLayout",
    "SignalBatch",
    "generate_layout",
    "gp_covariance",
    "sample_gaussian_signals",
    "add_noise",
    "empirical_covariance",
]


@dataclass(frozen=True)
class NodeLayout:
    """N points in the unit square plus the seed that produced them."""

    points: np.ndarray
    seed: int

    @property
    def n(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class SignalBatch:
    """K realizations (rows) of an N-dimensional signal."""

    signals: np.ndarray
    seed: int
    noise_sigma: float = 0.0

    def __post_init__(self):
        s = np.asarray(self.signals, dtype=float)
        if s.ndim != 2 or s.shape[0] < 1:
            raise EmptyBatchError("signal batch needs at least one realization")
        object.__setattr__(self, "signals", s)

    @property
    def count(self) -> int:
        return self.signals.shape[0]

    @property
    def n(self) -> int:
        return self.signals.shape[1]


def generate_layout(n: int, seed: int) -> NodeLayout:
    """n i.i.d. uniform points in [0,1] x [0,1]."""
    if n < 2:
        raise BadSizeError("layout needs at least 2 nodes")
    g = rng.generator(seed)
    pts = rng.uniform_open01(g, (n, 2))
    return NodeLayout(points=pts, seed=int(seed))


def gp_covariance(layout: NodeLayout, r: float, variance: float) -> np.ndarray:
    """Exponential-kernel covariance: variance * exp(-d_ij / r)."""
    if r <= 0:
        raise DegenerateRangeError("correlation range r must be > 0")
    if variance <= 0:
        raise ValidationError("variance must be > 0")
    pts = layout.points
    diff = pts[:, None, :] - pts[None, :, :]
    d = np.sqrt((diff * diff).sum(axis=-1))
    return variance * np.exp(-d / r)


def _sqrt_factor(cov):
    """Cholesky factor with escalating diagonal jitter (3 retries)."""
    n = cov.shape[0]
    base = 1e-10 * np.trace(cov) / n
    for attempt in range(4):
        jit = 0.0 if attempt == 0 else base * 10.0 ** (attempt - 1)
        try:
            return np.linalg.cholesky(cov + jit * np.eye(n))
        except np.linalg.LinAlgError:
            continue
    raise NotPSDError("covariance is not PSD even after diagonal jitter")


def sample_gaussian_signals(cov, count: int, seed: int) -> SignalBatch:
    """count i.i.d. zero-mean Gaussian vectors with the given covariance."""
    cov = _linalg.check_square_sym(cov, "covariance")
    if count < 1:
        raise EmptyBatchError("count must be >= 1")
    if not _linalg.is_psd(cov):
        raise NotPSDError("covariance is not PSD")
    if np.all(cov == 0):
        return SignalBatch(np.zeros((count, cov.shape[0])), seed=int(seed))
    factor = _sqrt_factor(cov)
    g = rng.generator(seed)
    z = rng.standard_normal(g, (cov.shape[0], count))
    return SignalBatch((factor @ z).T, seed=int(seed))


def add_noise(batch: SignalBatch, sigma: float, seed: int) -> SignalBatch:
    """Add independent N(0, sigma^2 I) noise to every realization."""
    if sigma < 0:
        raise ValidationError("sigma must be >= 0")
    if sigma == 0:
        return batch
    g = rng.generator(seed)
    noise = sigma * rng.standard_normal(g, batch.signals.shape)
    return SignalBatch(batch.signals + noise, seed=int(seed), noise_sigma=float(sigma))


def empirical_covariance(batch: SignalBatch) -> np.ndarray:
    """(1/K) sum of outer products of the realizations (no mean removal)."""
    x = batch.signals
    return _linalg.sym(x.T @ x / x.shape[0])
