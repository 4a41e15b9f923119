import itertools

import numpy as np
import pytest

import graphsamp as gs
from graphsamp.errors import (
    AlreadySelectedError,
    BadBudgetError,
    BadProbabilityError,
    IsolatedVertexError,
    MissingImportanceError,
    SingularOperatorError,
    ValidationError,
)

from conftest import cycle_adjacency, hop_distances, path_adjacency, rand_graph_adjacency, rand_pd


def _reference_greedy(omega, k, gamma):
    """Oracle: recompute -logdet(H + gamma*Omega) for every candidate at
    every step; no inverse maintenance."""
    n = omega.shape[0]
    current: list[int] = []
    for _ in range(k):
        best_j, best_val = None, None
        for j in range(n):
            if j in current:
                continue
            h = np.zeros((n, n))
            trial = current + [j]
            h[trial, trial] = 1.0
            val = np.linalg.slogdet(h + gamma * omega)[1]
            if best_val is None or val > best_val + 1e-12:
                best_j, best_val = j, val
        current.append(best_j)
    return current


class TestGreedyDoptimal:
    def test_picks_largest_inverse_diagonal_first(self):
        s = gs.greedy_doptimal(np.diag([1.0, 2.0, 4.0]), 1, gamma=1.0)
        assert list(s.indices) == [0]
        assert s.scores[0] == pytest.approx(1.0)

    def test_tie_break_lowest_index(self):
        s = gs.greedy_doptimal(np.eye(4), 2, gamma=1.0)
        assert list(s.indices) == [0, 1]

    def test_matches_reference_greedy(self, rng):
        for _ in range(15):
            n = int(rng.integers(4, 13))
            k = int(rng.integers(1, 5))
            omega = rand_pd(rng, n, floor=0.2)
            gamma = float(rng.random() + 0.05)
            mine = gs.greedy_doptimal(omega, k, gamma)
            ref = _reference_greedy(omega, k, gamma)
            obj_mine = gs.doptimal_objective(omega, mine, gamma)
            obj_ref = gs.doptimal_objective(omega, gs.SamplingSet(np.array(ref)), gamma)
            assert obj_mine == pytest.approx(obj_ref, abs=1e-9)

    def test_prefix_stability(self, rng):
        omega = rand_pd(rng, 20)
        full = gs.greedy_doptimal(omega, 8, gamma=0.3)
        for m in (1, 3, 5, 8):
            prefix = gs.greedy_doptimal(omega, m, gamma=0.3)
            assert np.array_equal(prefix.indices, full.indices[:m])

    def test_objective_strictly_improves(self, rng):
        omega = rand_pd(rng, 15)
        s = gs.greedy_doptimal(omega, 10, gamma=0.5)
        objs = [
            gs.doptimal_objective(omega, s.indices[:m], 0.5) for m in range(1, 11)
        ]
        assert all(objs[t + 1] < objs[t] for t in range(len(objs) - 1))
        assert np.all(s.scores > 0)

    def test_singular_operator_uses_shift(self, rng):
        lap = gs.build_graph_model(rand_graph_adjacency(rng, 8) + 0.05).laplacian
        s = gs.greedy_doptimal(lap, 3, gamma=0.5)
        assert len(s) == 3
        with pytest.raises(SingularOperatorError):
            gs.greedy_doptimal(lap, 3, gamma=0.5, shift_singular=False)

    def test_budget_validation(self):
        with pytest.raises(BadBudgetError):
            gs.greedy_doptimal(np.eye(3), 0, gamma=1.0)
        with pytest.raises(BadBudgetError):
            gs.greedy_doptimal(np.eye(3), 4, gamma=1.0)
        with pytest.raises(ValidationError):
            gs.greedy_doptimal(np.eye(3), 1, gamma=0.0)


class TestShermanMorrisonUpdate:
    def test_identity_update(self):
        state = gs.init_doptimal_state(np.eye(2), gamma=1.0)
        new = gs.sm_update(state, 0)
        assert np.allclose(new.g_inv, np.diag([0.5, 1.0]))
        assert list(new.selected.indices) == [0]

    def test_matches_direct_inverse(self, rng):
        omega = rand_pd(rng, 12)
        gamma = 0.7
        state = gs.init_doptimal_state(omega, gamma)
        base = gamma * omega
        order = rng.permutation(12)
        for count, idx in enumerate(order, start=1):
            state = gs.sm_update(state, int(idx))
            h = np.zeros((12, 12))
            h[order[:count], order[:count]] = 1.0
            direct = np.linalg.inv(h + base)
            rel = np.linalg.norm(state.g_inv - direct) / np.linalg.norm(direct)
            assert rel < 1e-8

    def test_all_updates_reach_full_inverse(self, rng):
        omega = rand_pd(rng, 10)
        state = gs.init_doptimal_state(omega, gamma=1.0)
        for i in range(10):
            state = gs.sm_update(state, i)
        assert np.allclose(state.g_inv, np.linalg.inv(np.eye(10) + omega), atol=1e-8)
        assert state.consistency_residual(omega) < 1e-6

    def test_already_selected(self):
        state = gs.init_doptimal_state(np.eye(3), gamma=1.0)
        state = gs.sm_update(state, 1)
        with pytest.raises(AlreadySelectedError):
            gs.sm_update(state, 1)


class TestVisSelect:
    def _model(self, q):
        n = len(q)
        return gs.build_graph_model(np.zeros((n, n)), vertex_importance=q)

    def test_orders_by_importance(self):
        s = gs.vis_select(self._model([3.0, 1.0, 2.0]), 2)
        assert list(s.indices) == [0, 2]
        assert list(s.scores) == [3.0, 2.0]

    def test_ties_lowest_index(self):
        s = gs.vis_select(self._model([1.0, 1.0, 1.0, 1.0]), 3)
        assert list(s.indices) == [0, 1, 2]

    def test_scale_invariance(self, rng):
        q = rng.random(20) + 0.1
        a = gs.vis_select(self._model(q), 7)
        b = gs.vis_select(self._model(5.5 * q), 7)
        assert np.array_equal(a.indices, b.indices)

    def test_missing_importance(self):
        model = gs.build_graph_model(np.zeros((3, 3)))
        with pytest.raises(MissingImportanceError):
            gs.vis_select(model, 1)


class TestRepulsionFilter:
    def test_two_node_path_one_hop(self):
        model = gs.build_graph_model(path_adjacency(2))
        f = gs.build_repulsion_filter(model, 1)
        assert np.array_equal(f.z_columns, [[0.0, 1.0], [1.0, 0.0]])

    def test_two_node_path_two_hops(self):
        model = gs.build_graph_model(path_adjacency(2))
        f = gs.build_repulsion_filter(model, 2)
        # (D^-1 A)^2 = I, so the power sum is the all-ones matrix
        assert np.array_equal(f.z_columns, [[1.0, 1.0], [1.0, 1.0]])

    def test_gram_is_column_inner_products(self, rng):
        model = gs.build_graph_model(rand_graph_adjacency(rng, 12) + 0.01)
        f = gs.build_repulsion_filter(model, 2)
        z = f.z_columns
        for i in range(12):
            for j in range(12):
                assert f.gram[i, j] == pytest.approx(float(z[:, i] @ z[:, j]), abs=1e-10)
        assert np.linalg.eigvalsh(f.gram)[0] >= -1e-10

    def test_columns_vanish_outside_hop_ball(self, rng):
        # BFS oracle: z_i entries beyond the p-hop ball are exactly zero
        for trial in range(8):
            n = int(rng.integers(5, 31))
            adj = rand_graph_adjacency(rng, n, density=0.15)
            model = gs.build_graph_model(adj)
            p = int(rng.integers(1, 4))
            f = gs.build_repulsion_filter(model, p)
            for i in range(n):
                dist = hop_distances(adj, i)
                far = (dist < 0) | (dist > p)
                assert np.all(f.z_columns[far, i] == 0.0)

    def test_penalty_vanishes_beyond_double_radius(self, rng):
        adj = path_adjacency(9)
        model = gs.build_graph_model(adj)
        f = gs.build_repulsion_filter(model, 2)
        dist = hop_distances(adj, 0)
        for j in range(9):
            if dist[j] > 4:  # strictly more than 2p hops apart
                assert f.penalty[0, j] == 0.0

    def test_isolated_vertex_policy(self):
        adj = np.zeros((3, 3))
        adj[0, 1] = adj[1, 0] = 1.0  # vertex 2 isolated
        model = gs.build_graph_model(adj)
        f = gs.build_repulsion_filter(model, 1)
        assert np.all(f.z_columns[:, 2] == 0) and np.all(f.z_columns[2, :] == 0)
        with pytest.raises(IsolatedVertexError):
            gs.build_repulsion_filter(model, 1, strict_isolated=True)


class TestVisrSelect:
    def test_single_pick_equals_vis(self, rng):
        adj = rand_graph_adjacency(rng, 10) + 0.01
        q = rng.random(10) + 0.1
        model = gs.build_graph_model(adj, vertex_importance=q)
        assert np.array_equal(gs.visr_select(model, 1).indices, gs.vis_select(model, 1).indices)

    def test_default_hop_count_rule(self):
        assert gs.default_hop_count(20, 100) == 3
        assert gs.default_hop_count(100, 100) == 1
        assert gs.default_hop_count(1, 100) == 50

    def test_four_node_path_second_pick_maximizes_rule(self):
        adj = path_adjacency(4)
        q = np.array([10.0, 9.9, 1.0, 1.0])
        model = gs.build_graph_model(adj, vertex_importance=q)
        f = gs.build_repulsion_filter(model, 1)
        s = gs.visr_select(model, 2, repulsion=f)
        assert s.indices[0] == 0
        # exhaustive check of the update rule over the three candidates
        expected = max(range(1, 4), key=lambda x: q[x] - f.penalty[x, 0])
        assert s.indices[1] == expected

    def test_cycle_uniform_importance_avoids_neighbors(self):
        for n in (6, 9, 12):
            adj = cycle_adjacency(n)
            model = gs.build_graph_model(adj, vertex_importance=np.ones(n))
            f = gs.build_repulsion_filter(model, 1)
            selected = []
            for step in range(n // 2):
                s = gs.visr_select(model, step + 1, repulsion=f)
                selected = list(s.indices)
                new = selected[-1]
                others = selected[:-1]
                candidates = [v for v in range(n) if v not in others]
                nonadjacent_available = any(
                    all(adj[v, u] == 0 for u in others) for v in candidates
                )
                if nonadjacent_available and others:
                    assert all(adj[new, u] == 0 for u in others)

    def test_precomputed_filter_matches_internal(self, rng):
        adj = rand_graph_adjacency(rng, 15) + 0.01
        q = rng.random(15) + 0.1
        model = gs.build_graph_model(adj, vertex_importance=q)
        k = 5
        f = gs.build_repulsion_filter(model, gs.default_hop_count(k, 15))
        a = gs.visr_select(model, k)
        b = gs.visr_select(model, k, repulsion=f)
        assert np.array_equal(a.indices, b.indices)

    def test_missing_importance(self):
        model = gs.build_graph_model(path_adjacency(4))
        with pytest.raises(MissingImportanceError):
            gs.visr_select(model, 2)


class TestRandomSelectors:
    def test_full_budget_returns_everything(self):
        s = gs.random_select_fixed(6, 6, seed=3)
        assert sorted(s.indices) == list(range(6))

    def test_fixed_is_uniform(self):
        hits = sum(gs.random_select_fixed(2, 1, seed=t).indices[0] == 0 for t in range(10_000))
        assert abs(hits / 10_000 - 0.5) < 0.02

    def test_fixed_deterministic(self):
        a = gs.random_select_fixed(30, 10, seed=77)
        b = gs.random_select_fixed(30, 10, seed=77)
        assert np.array_equal(a.indices, b.indices)

    def test_fixed_budget_validation(self):
        with pytest.raises(BadBudgetError):
            gs.random_select_fixed(5, 6, seed=0)

    def test_bernoulli_probability_one(self):
        s = gs.random_select_bernoulli(7, 1.0, seed=0)
        assert sorted(s.indices) == list(range(7))

    def test_bernoulli_mean_size_matches_binomial(self):
        # oracle: direct Bernoulli draws, unconditioned by the re-draw policy
        import graphsamp.rng as grng

        n, prob, trials = 100, 0.01, 10_000
        sizes = []
        for t in range(trials):
            g = grng.generator(t)
            mask = grng.uniform_open01(g, n) < prob
            sizes.append(mask.sum())
            if mask.any():
                s = gs.random_select_bernoulli(n, prob, seed=t)
                assert np.array_equal(s.indices, np.where(mask)[0])
        assert abs(np.mean(sizes) - 1.0) < 0.1

    def test_bernoulli_never_empty(self):
        for t in range(200):
            assert len(gs.random_select_bernoulli(50, 1.0 / 50, seed=t)) >= 1

    def test_bernoulli_deterministic(self):
        a = gs.random_select_bernoulli(40, 0.1, seed=5)
        b = gs.random_select_bernoulli(40, 0.1, seed=5)
        assert np.array_equal(a.indices, b.indices)

    def test_bernoulli_probability_validation(self):
        with pytest.raises(BadProbabilityError):
            gs.random_select_bernoulli(5, 0.0, seed=0)
        with pytest.raises(BadProbabilityError):
            gs.random_select_bernoulli(5, 1.5, seed=0)
