"""Storage-budget arithmetic for SVD versus angle-based compression.

All quantities count abstract storage units (one 64-bit number each);
container byte overhead is deliberately excluded.  Rank outputs are
capped at min(m, n) so reports stay physically meaningful.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BudgetOutOfRange, RankOutOfRange


@dataclass(frozen=True)
class StorageReport:
    m: int
    n: int
    l: int
    n_svd: int
    d_esvd: int
    sr_svd: float
    sr_esvd: float
    sr_hat: float
    l0: int


@dataclass(frozen=True)
class BudgetReport:
    budget: int
    m: int
    n: int
    l_svd_max: int
    l_esvd_max: int
    ratio: float | None


def svd_units(m: int, n: int, l: int) -> int:
    """Numbers stored by plain truncated SVD: (m + n + 1) * l."""
    return (m + n + 1) * l


def esvd_units(m: int, n: int, l: int) -> int:
    """Numbers stored by the angle encoding: (m + n - l) * l."""
    return (m + n - l) * l


def svd_failure_rank(m: int, n: int) -> int:
    """Largest l at which truncated SVD still saves space: floor(mn/(m+n+1))."""
    return (m * n) // (m + n + 1)


def storage_report(m: int, n: int, l: int) -> StorageReport:
    _check_dims(m, n)
    if not 1 <= l <= min(m, n):
        raise RankOutOfRange(f"need 1 <= l <= {min(m, n)}, got {l}")
    n_svd = svd_units(m, n, l)
    d_esvd = esvd_units(m, n, l)
    return StorageReport(
        m=m,
        n=n,
        l=l,
        n_svd=n_svd,
        d_esvd=d_esvd,
        sr_svd=1.0 - n_svd / (m * n),
        sr_esvd=1.0 - d_esvd / (m * n),
        sr_hat=(m + n - l) / (m + n + 1),
        l0=svd_failure_rank(m, n),
    )


def l_esvd_given_lsvd(m: int, n: int, l_svd: int) -> int:
    """Largest l whose angle encoding fits in the SVD budget of l_svd.

    Solves (m + n - l) * l <= (m + n + 1) * l_svd over integers, capped
    at min(m, n).  Always >= l_svd.
    """
    _check_dims(m, n)
    if not 1 <= l_svd <= min(m, n):
        raise RankOutOfRange(f"need 1 <= l_svd <= {min(m, n)}, got {l_svd}")
    return _max_rank_within(m, n, svd_units(m, n, l_svd))


def budget_report(budget: int, m: int, n: int) -> BudgetReport:
    """Maximal ranks fitting ``budget`` storage units under each scheme.

    l_svd_max = floor(M / (m+n+1)); l_esvd_max is the floor of the small
    root of l^2 - (m+n)l + M = 0.  Both are capped at min(m, n).
    """
    _check_dims(m, n)
    if not 1 <= budget <= m * n:
        raise BudgetOutOfRange(f"need 1 <= M <= {m * n}, got {budget}")
    l_svd_max = min(budget // (m + n + 1), min(m, n))
    l_esvd_max = _max_rank_within(m, n, budget)
    ratio = l_esvd_max / l_svd_max if l_svd_max >= 1 else None
    return BudgetReport(
        budget=budget,
        m=m,
        n=n,
        l_svd_max=l_svd_max,
        l_esvd_max=l_esvd_max,
        ratio=ratio,
    )


def _max_rank_within(m: int, n: int, budget: int) -> int:
    # Largest integer l <= min(m, n) with (m+n-l)*l <= budget.  The float
    # closed form can land one off at floor boundaries, so nudge with the
    # exact integer inequality.
    s = m + n
    disc = s * s - 4 * budget
    if disc < 0:
        l = min(m, n)
    else:
        l = int((s - math.sqrt(disc)) / 2.0)
    l = min(max(l, 0), min(m, n))
    while l + 1 <= min(m, n) and esvd_units(m, n, l + 1) <= budget:
        l += 1
    while l > 0 and esvd_units(m, n, l) > budget:
        l -= 1
    return l


def sr_hat_limit_probe(m_list: Sequence[int]) -> list[float]:
    """sr_hat at the SVD failure rank for square sizes; tends to 3/4."""
    values = []
    for m in m_list:
        if m < 10:
            raise RankOutOfRange(f"square sizes below 10 unsupported, got {m}")
        values.append(storage_report(m, m, svd_failure_rank(m, m)).sr_hat)
    return values


def _check_dims(m: int, n: int) -> None:
    if m < 1 or n < 1:
        raise RankOutOfRange(f"dimensions must be positive, got {m}x{n}")


def sr_curve_rows(m: int, n: int) -> Iterable[tuple]:
    """(l, sr_svd, sr_esvd, sr_hat) for l = 1..min(m, n)."""
    for l in range(1, min(m, n) + 1):
        rep = storage_report(m, n, l)
        yield (l, rep.sr_svd, rep.sr_esvd, rep.sr_hat)


def rank_tradeoff_rows(m: int, n: int) -> Iterable[tuple]:
    """(l_svd, matching l_esvd) over the full rank domain."""
    for l_svd in range(1, min(m, n) + 1):
        yield (l_svd, l_esvd_given_lsvd(m, n, l_svd))


def budget_curve_rows(m: int, n: int, budgets: Iterable[int]) -> Iterable[tuple]:
    """(M, l_svd_max, l_esvd_max) per budget."""
    for budget in budgets:
        rep = budget_report(budget, m, n)
        yield (budget, rep.l_svd_max, rep.l_esvd_max)


def write_csv(path, header: Sequence[str], rows: Iterable[tuple]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
