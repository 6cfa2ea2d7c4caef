import numpy as np
import pytest

import oracles
from esvd import coverage_p, mae, pearson
from esvd.errors import (
    DegenerateSpectrum,
    DegenerateVariance,
    RankOutOfRange,
    ShapeError,
)


class TestMae:
    def test_identical(self):
        x = np.arange(6.0).reshape(2, 3)
        assert mae(x, x) == 0.0

    def test_unit_offset(self):
        assert mae(np.zeros((2, 2)), np.ones((2, 2))) == 1.0

    def test_against_loop_oracle(self):
        rng = np.random.default_rng(42)
        x = rng.normal(size=(7, 5))
        y = rng.normal(size=(7, 5))
        assert mae(x, y) == pytest.approx(oracles.mae_loops(x, y), abs=1e-14)

    def test_triangle_bound(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            x, y, z = rng.normal(size=(3, 4, 6))
            assert mae(x, z) <= mae(x, y) + mae(y, z) + 1e-12

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            mae(np.zeros((2, 2)), np.zeros((2, 3)))


class TestPearson:
    def test_self_correlation(self):
        x = np.arange(12.0).reshape(3, 4)
        assert pearson(x, x) == pytest.approx(1.0)

    def test_anti_correlation(self):
        x = np.arange(12.0).reshape(3, 4)
        assert pearson(x, -x) == pytest.approx(-1.0)

    def test_affine_invariance(self):
        rng = np.random.default_rng(77)
        x = rng.normal(size=(6, 6))
        assert pearson(x, 3.5 * x + 2.0) == pytest.approx(1.0, abs=1e-12)
        assert pearson(0.1 * x - 4.0, x) == pytest.approx(1.0, abs=1e-12)

    def test_bounded(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            rho = pearson(rng.normal(size=(4, 4)), rng.normal(size=(4, 4)))
            assert abs(rho) <= 1.0 + 1e-12

    def test_degenerate_variance(self):
        with pytest.raises(DegenerateVariance):
            pearson(np.ones((2, 2)), np.eye(2))


class TestCoverage:
    def test_full_sum(self):
        assert coverage_p(np.array([4.0, 3.0, 2.0, 1.0]), 4) == 1.0

    def test_partial_sum(self):
        assert coverage_p(np.array([4.0, 3.0, 2.0, 1.0]), 2) == pytest.approx(0.7)

    def test_rank_out_of_range(self):
        with pytest.raises(RankOutOfRange):
            coverage_p(np.array([1.0]), 2)

    def test_degenerate_spectrum(self):
        with pytest.raises(DegenerateSpectrum):
            coverage_p(np.zeros(3), 1)
