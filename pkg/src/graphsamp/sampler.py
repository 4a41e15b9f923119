"""Sampling-set selection: greedy D-optimal design, vertex-importance
sampling (plain and with repulsion), and random baselines.

All selectors are pure functions of their inputs (plus an explicit seed for
the random ones) and break argmax ties toward the lowest vertex index.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels, _linalg, rng
from .core import GraphModel, SamplingSet
from .errors import (
    AlreadySelectedError,
    BadBudgetError,
    BadProbabilityError,
    IndexOutOfRangeError,
    IsolatedVertexError,
    MissingImportanceError,
    NotPSDError,
    SingularOperatorError,
    ValidationError,
)

__all__ = [
    "DOptState",
    "RepulsionFilter",
    "init_doptimal_state",
    "sm_update",
    "greedy_doptimal",
    "vis_select",
    "default_hop_count",
    "build_repulsion_filter",
    "visr_select",
    "random_select_fixed",
    "random_select_bernoulli",
]


def _check_budget(k, n):
    if not 1 <= k <= n:
        raise BadBudgetError(f"budget k={k} outside [1, {n}]")


def _check_operator(omega):
    om = _linalg.check_square_sym(omega, "operator")
    lo, hi = _linalg.min_max_eigvals(om)
    if lo < -_linalg.PSD_TOL * max(hi, abs(lo)):
        raise NotPSDError("operator is not PSD")
    return om


@dataclass(frozen=True)
class DOptState:
    """Greedy D-optimal selection state.

    ``g_inv`` is the maintained inverse of H + gamma * Omega for the current
    selection (of the shifted operator when the singular fallback engaged at
    initialization); ``selected`` records picks in order with their gains.
    """

    g_inv: np.ndarray
    selected: SamplingSet
    gamma: float

    def consistency_residual(self, omega) -> float:
        """Frobenius distance of g_inv * (H + gamma*Omega) from identity."""
        n = self.g_inv.shape[0]
        g = self.gamma * np.asarray(omega, dtype=float)
        idx = self.selected.indices
        g[idx, idx] += 1.0
        return float(np.linalg.norm(self.g_inv @ g - np.eye(n)))


def _base_inverse(omega, gamma, shift_singular):
    n = omega.shape[0]
    base = gamma * omega
    try:
        return _linalg.inv_pd(base)
    except NotPDError:
        if not shift_singular:
            raise SingularOperatorError(
                "gamma * Omega is singular and the shift fallback is disabled"
            ) from None
    # PSD-singular operator (e.g. a combinatorial Laplacian): work with the
    # rank-correcting shift gamma*Omega + (1/N) 11^T for the whole run
    return _linalg.inv_pd(
        base + np.full((n, n), 1.0 / n),
        err=SingularOperatorError,
        msg="gamma * Omega is not PSD even after the rank-correcting shift",
    )


def init_doptimal_state(omega, gamma: float, shift_singular: bool = True) -> DOptState:
    """Fresh selection state with an empty sampling set."""
    om = _check_operator(omega)
    if gamma <= 0:
        raise ValidationError("gamma must be > 0")
    g_inv = _base_inverse(om, gamma, shift_singular)
    empty = SamplingSet(np.empty(0, dtype=np.int64), np.empty(0), method="greedy")
    return DOptState(g_inv=g_inv, selected=empty, gamma=float(gamma))


def sm_update(state: DOptState, index: int) -> DOptState:
    """Add one vertex via the rank-one Sherman-Morrison inverse update."""
    n = state.g_inv.shape[0]
    if not 0 <= index < n:
        raise IndexOutOfRangeError(f"index {index} outside [0, {n})")
    if index in state.selected.indices:
        raise AlreadySelectedError(f"vertex {index} already selected")
    g = state.g_inv[:, index].copy()
    gain = g[index]
    new_inv = state.g_inv - np.outer(g / (1.0 + gain), g)
    old_scores = state.selected.scores
    if old_scores is None:
        old_scores = np.zeros(len(state.selected))
    sel = SamplingSet(
        np.append(state.selected.indices, index),
        np.append(old_scores, gain),
        method=state.selected.method,
    )
    return DOptState(g_inv=new_inv, selected=sel, gamma=state.gamma)


def greedy_doptimal(omega, k: int, gamma: float, shift_singular: bool = True) -> SamplingSet:
    """Greedy maximization of logdet(H + gamma * Omega) over k picks.

    Each step selects the unselected vertex with the largest diagonal entry
    of the current inverse (the matrix-determinant-lemma gain), then applies
    the Sherman-Morrison update, so no further inversions are needed.
    """
    om = _check_operator(omega)
    _check_budget(k, om.shape[0])
    if gamma <= 0:
        raise ValidationError("gamma must be > 0")
    g_inv = np.ascontiguousarray(_base_inverse(om, gamma, shift_singular))
    indices, scores = _kernels.greedy_steps(g_inv, int(k))
    return SamplingSet(indices, scores, method="greedy")


def vis_select(model: GraphModel, k: int) -> SamplingSet:
    """The k vertices of largest importance, in descending order."""
    if model.vertex_importance is None:
        raise MissingImportanceError("model has no vertex importance")
    _check_budget(k, model.n)
    q = model.vertex_importance
    order = np.argsort(-q, kind="stable")[:k]
    return SamplingSet(order, q[order], method="vis")


def default_hop_count(k: int, n: int) -> int:
    """Hop count ceil(1 / (2 alpha)) for sampling rate alpha = k / n."""
    return int(math.ceil(n / (2.0 * k)))


@dataclass(frozen=True)
class RepulsionFilter:
    """p-hop random-walk low-pass filter with precomputed inner products.

    ``z_columns`` holds Z = sum_{l=1..p} (D^-1 A)^l, whose column i is the
    filtered delta at vertex i (supported on the p-hop ball around i), and
    ``gram`` holds their pairwise inner products.  ``penalty`` is the matrix
    actually used for repulsion: inner products of the hop-0-augmented
    columns (delta_i + z_i), which guarantees that immediate neighbors repel
    even on triangle-free graphs where the plain gram entry vanishes.
    """

    p: int
    z_columns: np.ndarray
    gram: np.ndarray
    penalty: np.ndarray


def build_repulsion_filter(model: GraphModel, p: int, strict_isolated: bool = False) -> RepulsionFilter:
    """Accumulate random-walk powers and their gram matrix for VISR."""
    if p < 1:
        raise ValidationError("hop count p must be >= 1")
    deg = model.degrees
    isolated = deg == 0
    if strict_isolated and np.any(isolated):
        raise IsolatedVertexError(f"isolated vertices: {np.where(isolated)[0].tolist()}")
    # isolated vertices get a zero row: they repel nothing and nothing repels them
    safe = np.where(isolated, 1.0, deg)
    walk = model.adjacency / safe[:, None]
    z = np.zeros_like(walk)
    power = np.eye(model.n)
    for _ in range(p):
        power = power @ walk
        z += power
    gram = _linalg.sym(z.T @ z)
    penalty = gram + z + z.T
    return RepulsionFilter(p=int(p), z_columns=z, gram=gram, penalty=penalty)


def visr_select(
    model: GraphModel,
    k: int,
    p: int | None = None,
    repulsion: RepulsionFilter | None = None,
) -> SamplingSet:
    """Importance sampling with repulsion between selected vertices.

    Iteratively adds the unselected vertex maximizing q_x minus the summed
    filter inner products against the current selection; the first pick
    therefore coincides with ``vis_select``.  When ``p`` is omitted it
    follows ``default_hop_count``; pass a prebuilt ``repulsion`` filter to
    reuse it across calls.
    """
    if model.vertex_importance is None:
        raise MissingImportanceError("model has no vertex importance")
    _check_budget(k, model.n)
    if repulsion is None:
        repulsion = build_repulsion_filter(model, p if p is not None else default_hop_count(k, model.n))
    # copies: the kernels take writable buffers and the model arrays are frozen
    q = np.array(model.vertex_importance, dtype=float)
    penalty = np.array(repulsion.penalty, dtype=float)
    indices, scores = _kernels.repulsion_steps(q, penalty, int(k))
    return SamplingSet(indices, scores, method="visr")


def random_select_fixed(n: int, k: int, seed: int) -> SamplingSet:
    """Uniform random k-subset without replacement."""
    _check_budget(k, n)
    g = rng.generator(seed)
    return SamplingSet(g.permutation(n)[:k], method="random")


def random_select_bernoulli(n: int, prob: float, seed: int) -> SamplingSet:
    """Independent per-vertex inclusion with the given probability.

    An empty draw is retried with the seed incremented, since reconstruction
    is undefined for an empty sampling set.
    """
    if not 0 < prob <= 1:
        raise BadProbabilityError("inclusion probability must be in (0, 1]")
    attempt = 0
    while True:
        g = rng.generator(int(seed) + attempt)
        mask = rng.uniform_open01(g, n) < prob
        if mask.any():
            return SamplingSet(np.where(mask)[0], method="bernoulli")
        attempt += 1
