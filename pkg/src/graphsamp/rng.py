"""Deterministic, portable random number generation.

All randomness in the package flows through PCG64 generators seeded
explicitly by the caller.  Normal variates use the inverse-CDF transform on
uniforms built from 53 random bits, so identical seeds give bit-identical
streams across platforms and numpy versions.
"""

import numpy as np
from scipy.special import ndtri

__all__ = ["generator", "uniform_open01", "standard_normal", "derive_seed"]

_TWO53 = float(1 << 53)


def generator(seed) -> np.random.Generator:
    """PCG64 generator from an integer seed or a SeedSequence."""
    return np.random.Generator(np.random.PCG64(seed))


def uniform_open01(rng: np.random.Generator, size) -> np.ndarray:
    """Uniform draws strictly inside (0, 1)."""
    return (rng.integers(0, 1 << 53, size=size, dtype=np.int64) + 0.5) / _TWO53


def standard_normal(rng: np.random.Generator, size) -> np.ndarray:
    """N(0, 1) draws via the inverse normal CDF."""
    return ndtri(uniform_open01(rng, size))


def derive_seed(*keys: int) -> int:
    """Collision-resistant integer sub-seed from a tuple of integer keys."""
    ss = np.random.SeedSequence([int(k) & ((1 << 63) - 1) for k in keys])
    return int(ss.generate_state(1, np.uint64)[0])
