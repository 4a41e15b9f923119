"""Shared test helpers."""

import numpy as np
import pytest

import graphsamp as gs


def rand_psd(rng, n, rank=None):
    """Random PSD matrix (possibly rank deficient)."""
    r = rank if rank is not None else n
    a = rng.standard_normal((n, r))
    return a @ a.T / n


def rand_pd(rng, n, floor=0.1):
    return rand_psd(rng, n) + floor * np.eye(n)


def rand_graph_adjacency(rng, n, density=0.4):
    """Random nonnegative symmetric adjacency with zero diagonal."""
    a = rng.random((n, n)) * (rng.random((n, n)) < density)
    a = np.triu(a, k=1)
    return a + a.T


def path_adjacency(n, weights=None):
    a = np.zeros((n, n))
    w = np.ones(n - 1) if weights is None else np.asarray(weights, dtype=float)
    for i in range(n - 1):
        a[i, i + 1] = w[i]
        a[i + 1, i] = w[i]
    return a


def cycle_adjacency(n):
    a = path_adjacency(n)
    a[0, n - 1] = 1.0
    a[n - 1, 0] = 1.0
    return a


def hop_distances(adjacency, source):
    """BFS hop distances from source (-1 when unreachable); independent oracle."""
    n = adjacency.shape[0]
    dist = np.full(n, -1, dtype=int)
    dist[source] = 0
    frontier = [source]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            for v in range(n):
                if adjacency[u, v] > 0 and dist[v] < 0:
                    dist[v] = d
                    nxt.append(v)
        frontier = nxt
    return dist


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def paper_layout():
    return gs.generate_layout(100, 12345)


@pytest.fixture(scope="session")
def paper_cov(paper_layout):
    return gs.gp_covariance(paper_layout, 0.02, 10.0)
