"""Pure-numpy kernel implementations (fallback backend).

These mirror the Cython kernels in ``_fast.pyx`` operation for operation;
see that file for the authoritative loop semantics.
"""

import numpy as np

__all__ = ["edge_sweep", "importance_sweep", "greedy_steps", "repulsion_steps"]


def edge_sweep(W, M, Minv, Suu, reg, s_floor):
    """One coordinate-descent pass over all vertex pairs (i < j), in place.

    W is the adjacency, M the working operator (L plus shift or diagonal),
    Minv its maintained inverse, and Suu[i, j] = S_ii + S_jj - 2 S_ij.
    Each accepted update is the exact 1-D minimizer of
    -logdet(M + t u u^T) + t * (Suu[i, j] + reg) over t >= -W[i, j]
    with u = e_i - e_j, applied through a rank-one inverse correction.
    Returns the number of changed weights.
    """
    n = W.shape[0]
    changed = 0
    for i in range(n - 1):
        for j in range(i + 1, n):
            s = Suu[i, j] + reg
            if s <= s_floor:
                continue  # direction is numerically unbounded; leave it
            v = Minv[:, i] - Minv[:, j]
            c = v[i] - v[j]
            if c <= 0.0:
                continue  # lost positive-definiteness signal; skip
            t = 1.0 / s - 1.0 / c
            if t < -W[i, j]:
                t = -W[i, j]
            if t == 0.0:
                continue
            den = 1.0 + t * c
            if den <= 1e-14:
                continue  # removing this edge would make M singular
            W[i, j] += t
            W[j, i] = W[i, j]
            M[i, i] += t
            M[j, j] += t
            M[i, j] -= t
            M[j, i] -= t
            Minv -= np.outer((t / den) * v, v)
            changed += 1
    return changed


def importance_sweep(q, M, Minv, s_diag, q_floor):
    """One coordinate-descent pass over the vertex importances, in place.

    Solves s_diag[i] = [(M + t e_i e_i^T)^-1]_ii for t in closed form and
    clips so q_i stays above q_floor.  Returns the number of changes.
    """
    n = q.shape[0]
    changed = 0
    for i in range(n):
        m = Minv[i, i]
        if m <= 0.0 or s_diag[i] <= 0.0:
            continue
        t = 1.0 / s_diag[i] - 1.0 / m
        if t < q_floor - q[i]:
            t = q_floor - q[i]
        if t == 0.0:
            continue
        den = 1.0 + t * m
        if den <= 1e-14:
            continue
        q[i] += t
        M[i, i] += t
        v = Minv[:, i].copy()
        Minv -= np.outer((t / den) * v, v)
        changed += 1
    return changed


def greedy_steps(Ginv, k):
    """k greedy D-optimal selections with Sherman-Morrison updates.

    At each step picks the unselected index with the largest diagonal entry
    of Ginv (lowest index on ties), records that gain as the score, then
    applies the rank-one inverse update for adding e_j e_j^T.  Mutates Ginv.
    """
    n = Ginv.shape[0]
    indices = np.empty(k, dtype=np.int64)
    scores = np.empty(k, dtype=float)
    selected = np.zeros(n, dtype=bool)
    for step in range(k):
        gains = np.where(selected, -np.inf, np.diag(Ginv))
        j = int(np.argmax(gains))
        g = Ginv[:, j].copy()
        indices[step] = j
        scores[step] = g[j]
        selected[j] = True
        Ginv -= np.outer(g / (1.0 + g[j]), g)
    return indices, scores


def repulsion_steps(q, penalty, k):
    """k repulsion-penalized importance selections.

    Score of candidate x is q[x] minus the accumulated penalty column sums
    over already-selected vertices; ties go to the lowest index.
    """
    n = q.shape[0]
    indices = np.empty(k, dtype=np.int64)
    scores = np.empty(k, dtype=float)
    acc = np.zeros(n, dtype=float)
    selected = np.zeros(n, dtype=bool)
    for step in range(k):
        vals = np.where(selected, -np.inf, q - acc)
        j = int(np.argmax(vals))
        indices[step] = j
        scores[step] = vals[j]
        selected[j] = True
        acc += penalty[:, j]
    return indices, scores
