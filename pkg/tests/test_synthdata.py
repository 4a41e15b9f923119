import math

import numpy as np
import pytest

import graphsamp as gs
from graphsamp.errors import (
    BadSizeError,
    DegenerateRangeError,
    EmptyBatchError,
    NotPSDError,
    ValidationError,
)


class TestGenerateLayout:
    def test_deterministic(self):
        a = gs.generate_layout(100, 7)
        b = gs.generate_layout(100, 7)
        assert np.array_equal(a.points, b.points)

    def test_in_unit_square(self):
        layout = gs.generate_layout(2, 3)
        assert layout.points.shape == (2, 2)
        assert np.all(layout.points >= 0) and np.all(layout.points <= 1)

    def test_different_seeds_differ(self):
        assert not np.array_equal(
            gs.generate_layout(50, 1).points, gs.generate_layout(50, 2).points
        )

    def test_too_small(self):
        with pytest.raises(BadSizeError):
            gs.generate_layout(1, 0)


class TestGpCovariance:
    def test_diagonal_is_variance(self, paper_layout):
        cov = gs.gp_covariance(paper_layout, r=0.02, variance=10.0)
        assert np.all(np.diag(cov) == 10.0)

    def test_coincident_points_full_correlation(self):
        layout = gs.NodeLayout(points=np.array([[0.5, 0.5], [0.5, 0.5]]), seed=0)
        cov = gs.gp_covariance(layout, r=0.1, variance=3.0)
        assert cov[0, 1] == 3.0

    def test_distance_equal_to_range(self):
        layout = gs.NodeLayout(points=np.array([[0.0, 0.0], [0.02, 0.0]]), seed=0)
        cov = gs.gp_covariance(layout, r=0.02, variance=10.0)
        # closed form: 10 * exp(-1)
        assert cov[0, 1] == pytest.approx(10.0 * math.exp(-1.0), rel=1e-12)
        assert cov[0, 1] == pytest.approx(3.678794411714423, rel=1e-9)

    def test_symmetric_with_bounded_offdiagonals(self, rng):
        layout = gs.generate_layout(30, 11)
        cov = gs.gp_covariance(layout, r=0.1, variance=2.0)
        assert np.array_equal(cov, cov.T)
        off = cov[~np.eye(30, dtype=bool)]
        assert np.all(off > 0) and np.all(off <= 2.0)

    def test_bad_range(self, paper_layout):
        with pytest.raises(DegenerateRangeError):
            gs.gp_covariance(paper_layout, r=0.0, variance=1.0)
        with pytest.raises(ValidationError):
            gs.gp_covariance(paper_layout, r=0.1, variance=0.0)


class TestSampleGaussianSignals:
    def test_zero_covariance_gives_zero_signals(self):
        batch = gs.sample_gaussian_signals(np.zeros((3, 3)), 5, 0)
        assert np.array_equal(batch.signals, np.zeros((5, 3)))

    def test_identity_covariance_variance(self):
        # law of large numbers: per-coordinate sample variance near 1
        batch = gs.sample_gaussian_signals(np.eye(4), 100_000, 42)
        var = batch.signals.var(axis=0)
        assert np.all(np.abs(var - 1.0) < 0.05)

    def test_empirical_covariance_concentrates(self, paper_cov):
        batch = gs.sample_gaussian_signals(paper_cov, 1000, 5)
        emp = gs.empirical_covariance(batch)
        rel = np.linalg.norm(emp - paper_cov) / np.linalg.norm(paper_cov)
        assert rel < 0.15

    def test_deterministic(self, paper_cov):
        a = gs.sample_gaussian_signals(paper_cov, 10, 9)
        b = gs.sample_gaussian_signals(paper_cov, 10, 9)
        assert np.array_equal(a.signals, b.signals)

    def test_not_psd_rejected(self):
        with pytest.raises(NotPSDError):
            gs.sample_gaussian_signals(np.diag([1.0, -1.0]), 3, 0)

    def test_empty_count_rejected(self):
        with pytest.raises(EmptyBatchError):
            gs.sample_gaussian_signals(np.eye(2), 0, 0)


class TestAddNoise:
    def test_zero_sigma_returns_input_unchanged(self):
        batch = gs.sample_gaussian_signals(np.eye(3), 4, 1)
        noisy = gs.add_noise(batch, 0.0, 99)
        assert noisy is batch

    def test_unit_sigma_sample_std(self):
        batch = gs.SignalBatch(np.zeros((100_000, 1)), seed=0)
        noisy = gs.add_noise(batch, 1.0, 7)
        assert abs(noisy.signals.std() - 1.0) < 0.02

    def test_deterministic(self):
        batch = gs.SignalBatch(np.zeros((10, 4)), seed=0)
        a = gs.add_noise(batch, 0.5, 3)
        b = gs.add_noise(batch, 0.5, 3)
        assert np.array_equal(a.signals, b.signals)
        assert a.noise_sigma == 0.5

    def test_negative_sigma_rejected(self):
        batch = gs.SignalBatch(np.zeros((2, 2)), seed=0)
        with pytest.raises(ValidationError):
            gs.add_noise(batch, -1.0, 0)


class TestEmpiricalCovariance:
    def test_single_signal_outer_product(self):
        batch = gs.SignalBatch(np.array([[1.0, -1.0]]), seed=0)
        assert np.array_equal(
            gs.empirical_covariance(batch), np.array([[1.0, -1.0], [-1.0, 1.0]])
        )

    def test_zero_batch(self):
        batch = gs.SignalBatch(np.zeros((5, 3)), seed=0)
        assert np.array_equal(gs.empirical_covariance(batch), np.zeros((3, 3)))

    def test_paper_protocol_diagonal_near_variance(self, paper_cov):
        batch = gs.sample_gaussian_signals(paper_cov, 1000, 21)
        emp = gs.empirical_covariance(batch)
        assert np.all(np.abs(np.diag(emp) - 10.0) < 1.5)

    def test_always_psd(self, rng):
        for _ in range(10):
            k, n = int(rng.integers(1, 8)), int(rng.integers(2, 10))
            batch = gs.SignalBatch(rng.standard_normal((k, n)), seed=0)
            w = np.linalg.eigvalsh(gs.empirical_covariance(batch))
            assert w[0] >= -1e-9 * max(w[-1], 1e-300)

    def test_empty_rejected(self):
        with pytest.raises(EmptyBatchError):
            gs.SignalBatch(np.zeros((0, 3)), seed=0)
