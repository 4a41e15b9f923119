# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernel implementations (preferred backend).

Semantics are shared with the numpy fallback in ``_slow.py``: in-place
coordinate-descent sweeps maintaining a rank-one-updated inverse, and
argmax selection loops with lowest-index tie-breaking.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

__all__ = ["edge_sweep", "importance_sweep", "greedy_steps", "repulsion_steps"]


def edge_sweep(double[:, ::1] W, double[:, ::1] M, double[:, ::1] Minv,
               double[:, ::1] Suu, double reg, double s_floor):
    """One coordinate-descent pass over all vertex pairs (i < j), in place."""
    cdef Py_ssize_t n = W.shape[0]
    cdef Py_ssize_t i, j, a, b
    cdef double s, c, t, den, va
    cdef int changed = 0
    cdef double[::1] v = np.empty(n, dtype=np.float64)

    for i in range(n - 1):
        for j in range(i + 1, n):
            s = Suu[i, j] + reg
            if s <= s_floor:
                continue
            for a in range(n):
                v[a] = Minv[a, i] - Minv[a, j]
            c = v[i] - v[j]
            if c <= 0.0:
                continue
            t = 1.0 / s - 1.0 / c
            if t < -W[i, j]:
                t = -W[i, j]
            if t == 0.0:
                continue
            den = 1.0 + t * c
            if den <= 1e-14:
                continue
            W[i, j] += t
            W[j, i] = W[i, j]
            M[i, i] += t
            M[j, j] += t
            M[i, j] -= t
            M[j, i] -= t
            for a in range(n):
                va = (t / den) * v[a]
                if va != 0.0:
                    for b in range(n):
                        Minv[a, b] -= va * v[b]
            changed += 1
    return changed


def importance_sweep(double[::1] q, double[:, ::1] M, double[:, ::1] Minv,
                     double[::1] s_diag, double q_floor):
    """One coordinate-descent pass over the vertex importances, in place."""
    cdef Py_ssize_t n = q.shape[0]
    cdef Py_ssize_t i, a, b
    cdef double m, t, den, va
    cdef int changed = 0
    cdef double[::1] v = np.empty(n, dtype=np.float64)

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
        for a in range(n):
            v[a] = Minv[a, i]
        for a in range(n):
            va = (t / den) * v[a]
            if va != 0.0:
                for b in range(n):
                    Minv[a, b] -= va * v[b]
        changed += 1
    return changed


def greedy_steps(double[:, ::1] Ginv, Py_ssize_t k):
    """k greedy D-optimal selections with Sherman-Morrison updates."""
    cdef Py_ssize_t n = Ginv.shape[0]
    cdef Py_ssize_t step, i, a, b, j
    cdef double best, coef, ga
    indices_arr = np.empty(k, dtype=np.int64)
    scores_arr = np.empty(k, dtype=np.float64)
    cdef cnp.int64_t[::1] indices = indices_arr
    cdef double[::1] scores = scores_arr
    cdef unsigned char[::1] selected = np.zeros(n, dtype=np.uint8)
    cdef double[::1] g = np.empty(n, dtype=np.float64)

    for step in range(k):
        j = -1
        best = 0.0
        for i in range(n):
            if selected[i]:
                continue
            if j < 0 or Ginv[i, i] > best:
                j = i
                best = Ginv[i, i]
        for a in range(n):
            g[a] = Ginv[a, j]
        indices[step] = j
        scores[step] = g[j]
        selected[j] = 1
        coef = 1.0 / (1.0 + g[j])
        for a in range(n):
            ga = g[a] * coef
            if ga != 0.0:
                for b in range(n):
                    Ginv[a, b] -= ga * g[b]
    return indices_arr, scores_arr


def repulsion_steps(double[::1] q, double[:, ::1] penalty, Py_ssize_t k):
    """k repulsion-penalized importance selections."""
    cdef Py_ssize_t n = q.shape[0]
    cdef Py_ssize_t step, i, a, j
    cdef double best, val
    indices_arr = np.empty(k, dtype=np.int64)
    scores_arr = np.empty(k, dtype=np.float64)
    cdef cnp.int64_t[::1] indices = indices_arr
    cdef double[::1] scores = scores_arr
    cdef unsigned char[::1] selected = np.zeros(n, dtype=np.uint8)
    cdef double[::1] acc = np.zeros(n, dtype=np.float64)

    for step in range(k):
        j = -1
        best = 0.0
        for i in range(n):
            if selected[i]:
                continue
            val = q[i] - acc[i]
            if j < 0 or val > best:
                j = i
                best = val
        indices[step] = j
        scores[step] = best
        selected[j] = 1
        for a in range(n):
            acc[a] += penalty[a, j]
    return indices_arr, scores_arr
