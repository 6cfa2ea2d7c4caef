from fractions import Fraction

import numpy as np
import pytest

import oracles
from esvd import (
    budget_report,
    l_esvd_given_lsvd,
    sr_hat_limit_probe,
    storage_report,
    svd_failure_rank,
)
from esvd.analysis import budget_curve_rows, rank_tradeoff_rows, sr_curve_rows
from esvd.errors import BudgetOutOfRange, RankOutOfRange


class TestStorageReport:
    def test_large_image_case(self):
        rep = storage_report(3348, 3668, 1750)
        assert rep.l0 == 1750
        assert rep.sr_hat == pytest.approx(Fraction(5266, 7017), abs=1e-12)
        assert round(rep.sr_hat, 4) == 0.7505

    def test_sr_esvd_zero_at_full_rank(self):
        for m, n in [(10, 10), (25, 10), (400, 375)]:
            rep = storage_report(m, n, min(m, n))
            assert rep.sr_esvd == 0.0

    def test_direct_arithmetic(self):
        rep = storage_report(100, 150, 59)
        assert rep.n_svd == 251 * 59 == 14809
        assert rep.d_esvd == 191 * 59 == 11269

    def test_gap_identity(self):
        # sr_esvd - sr_svd == l*(l+1)/(m*n), algebraically.
        rng = np.random.default_rng(0)
        for _ in range(200):
            m = int(rng.integers(2, 500))
            n = int(rng.integers(2, 500))
            l = int(rng.integers(1, min(m, n) + 1))
            rep = storage_report(m, n, l)
            assert rep.sr_esvd - rep.sr_svd == pytest.approx(
                l * (l + 1) / (m * n), abs=1e-12
            )
            assert rep.sr_esvd >= rep.sr_svd
            assert rep.sr_esvd >= 0.0

    def test_sr_svd_negative_iff_beyond_l0(self):
        m, n = 37, 29
        l0 = svd_failure_rank(m, n)
        for l in range(1, min(m, n) + 1):
            rep = storage_report(m, n, l)
            assert (rep.sr_svd < 0) == (l > l0)

    def test_sr_hat_strictly_decreasing(self):
        values = [row[3] for row in sr_curve_rows(40, 60)]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_rank_out_of_range(self):
        with pytest.raises(RankOutOfRange):
            storage_report(10, 10, 11)
        with pytest.raises(RankOutOfRange):
            storage_report(10, 10, 0)


class TestRankTradeoff:
    def test_tiny_budget(self):
        assert l_esvd_given_lsvd(100, 150, 1) == 1

    def test_scan_oracle_at_59(self):
        budget = 251 * 59
        expected = oracles.scan_max_rank_esvd(budget, 100, 150)
        assert expected == 96  # frozen from the scan, (250-96)*96 = 14784
        assert l_esvd_given_lsvd(100, 150, 59) == expected

    def test_always_at_least_lsvd_and_monotone(self):
        for m, n in [(100, 150), (12, 40)]:
            values = [le for _, le in rank_tradeoff_rows(m, n)]
            assert all(le >= ls for ls, le in enumerate(values, start=1))
            assert all(b >= a for a, b in zip(values, values[1:]))

    def test_matches_scan_everywhere(self):
        m, n = 33, 21
        for l_svd in range(1, 22):
            expected = oracles.scan_max_rank_esvd((m + n + 1) * l_svd, m, n)
            assert l_esvd_given_lsvd(m, n, l_svd) == expected


class TestBudgetReport:
    def test_full_budget(self):
        rep = budget_report(15000, 100, 150)
        assert rep.l_svd_max == 59
        assert rep.l_esvd_max == 100
        assert rep.ratio == pytest.approx(100 / 59)

    def test_small_budget(self):
        rep = budget_report(1000, 100, 150)
        assert rep.l_svd_max == 3
        assert rep.l_esvd_max == 4

    def test_scan_oracle_sweep(self):
        for budget in range(251, 15001, 97):
            rep = budget_report(budget, 100, 150)
            assert rep.l_svd_max == oracles.scan_max_rank_svd(budget, 100, 150)
            assert rep.l_esvd_max == oracles.scan_max_rank_esvd(budget, 100, 150)

    def test_esvd_max_dominates(self):
        for budget in range(251, 15001, 251):
            rep = budget_report(budget, 100, 150)
            assert rep.l_esvd_max >= rep.l_svd_max >= 1

    def test_ratio_bound(self):
        # Real-valued bound 1 + (min+1)/max, plus one unit of flooring slack.
        m, n = 100, 150
        bound = 1 + (min(m, n) + 1) / max(m, n)
        for budget in range(251, m * n + 1, 13):
            rep = budget_report(budget, m, n)
            if rep.l_svd_max >= 1:
                slack = 1.0 / rep.l_svd_max
                assert rep.ratio <= bound + slack

    def test_budget_out_of_range(self):
        with pytest.raises(BudgetOutOfRange):
            budget_report(0, 10, 10)
        with pytest.raises(BudgetOutOfRange):
            budget_report(101, 10, 10)

    def test_curve_rows(self):
        rows = list(budget_curve_rows(100, 150, [1000, 15000]))
        assert rows == [(1000, 3, 4), (15000, 59, 100)]


class TestSrHatLimit:
    def test_small_square(self):
        assert sr_hat_limit_probe([10]) == [pytest.approx(16 / 21)]

    def test_limit_approached_from_above(self):
        values = sr_hat_limit_probe([10, 100, 1000, 10000])
        assert all(v > 0.75 for v in values)
        assert all(b <= a for a, b in zip(values, values[1:]))
        assert abs(values[-1] - 0.75) < 1e-4
