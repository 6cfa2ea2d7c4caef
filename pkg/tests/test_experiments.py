import numpy as np
import pytest

from esvd import (
    ExperimentRow,
    LosslessRow,
    SimulationConfig,
    run_lossless_trial,
    run_simulation,
    scatter_points,
    write_lossless_csv,
    write_simulation_csv,
)
from esvd.errors import ShapeError

SMALL_CFG = SimulationConfig(
    m=20,
    n=30,
    budget_start=100,
    budget_stop=300,
    budget_step=100,
    repetitions=3,
    seed=7,
)


class TestLosslessTrial:
    def test_errors_are_tiny(self):
        rows = run_lossless_trial(count=3, size=25, l_list=[5, 10], seed=1)
        assert [row.l for row in rows] == [5, 10]
        for row in rows:
            assert 0 < row.mae_u_mean < 1e-13
            assert 0 < row.mae_v_mean < 1e-13
            assert 0 < row.mae_x_mean < 1e-11

    def test_deterministic_given_seed(self):
        a = run_lossless_trial(count=2, size=15, l_list=[4], seed=99)
        b = run_lossless_trial(count=2, size=15, l_list=[4], seed=99)
        assert a == b

    def test_seed_changes_results(self):
        a = run_lossless_trial(count=2, size=15, l_list=[4], seed=1)
        b = run_lossless_trial(count=2, size=15, l_list=[4], seed=2)
        assert a != b

    def test_supplied_planes(self):
        rng = np.random.default_rng(3)
        planes = [rng.integers(0, 256, (20, 20)).astype(float) for _ in range(2)]
        rows = run_lossless_trial(count=2, size=16, l_list=[6], planes=planes)
        assert rows[0].mae_x_mean < 1e-11

    def test_planes_too_few_or_small(self):
        plane = np.zeros((10, 10))
        with pytest.raises(ShapeError):
            run_lossless_trial(count=2, size=8, l_list=[2], planes=[plane])
        with pytest.raises(ShapeError):
            run_lossless_trial(count=1, size=12, l_list=[2], planes=[plane])

    def test_csv_output(self, tmp_path):
        rows = [LosslessRow(l=5, mae_u_mean=1e-16, mae_v_mean=2e-16, mae_x_mean=3e-15)]
        path = tmp_path / "out.csv"
        write_lossless_csv(path, rows)
        lines = path.read_text().splitlines()
        assert lines[0] == "l,mae_u_mean,mae_v_mean,mae_x_mean"
        assert lines[1].startswith("5,1e-16,2e-16,")


class TestSimulation:
    def test_small_sweep_shape_and_ordering(self):
        rows = run_simulation(SMALL_CFG)
        assert [row.budget for row in rows] == [100, 200, 300]
        for row in rows:
            assert row.l_esvd_max >= row.l_svd_max >= 1
            assert row.rho_esvd_mean >= row.rho_svd_mean
            assert row.p_esvd_mean >= row.p_svd_mean
            assert 0.0 < row.rho_svd_mean <= 1.0
            assert 0.0 < row.p_esvd_mean <= 1.0

    def test_full_budget_is_exact(self):
        cfg = SimulationConfig(
            m=10,
            n=12,
            budget_start=120,
            budget_stop=120,
            budget_step=1,
            repetitions=2,
            seed=5,
        )
        (row,) = run_simulation(cfg)
        assert row.l_esvd_max == 10
        assert row.rho_esvd_mean == pytest.approx(1.0, abs=1e-12)
        assert row.p_esvd_mean == pytest.approx(1.0, abs=1e-12)

    def test_byte_identical_determinism(self, tmp_path):
        paths = []
        for run in range(2):
            path = tmp_path / f"run{run}.csv"
            write_simulation_csv(path, run_simulation(SMALL_CFG))
            paths.append(path)
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_csv_header(self, tmp_path):
        path = tmp_path / "sim.csv"
        rows = [
            ExperimentRow(
                budget=100,
                l_svd_max=1,
                l_esvd_max=2,
                rho_svd_mean=0.5,
                rho_esvd_mean=0.6,
                p_svd_mean=0.7,
                p_esvd_mean=0.8,
            )
        ]
        write_simulation_csv(path, rows)
        lines = path.read_text().splitlines()
        assert lines[0] == (
            "M,l_svd_max,l_esvd_max,rho_svd_mean,rho_esvd_mean,"
            "p_svd_mean,p_esvd_mean"
        )
        assert lines[1] == "100,1,2,0.5,0.6,0.7,0.8"


class TestScatter:
    def test_points_shape_and_determinism(self):
        points = scatter_points(SMALL_CFG, 200)
        assert len(points) == SMALL_CFG.m * SMALL_CFG.n
        assert points == scatter_points(SMALL_CFG, 200)
        x, x_svd, x_esvd = np.asarray(points).T
        assert np.corrcoef(x, x_esvd)[0, 1] >= np.corrcoef(x, x_svd)[0, 1] - 1e-9
