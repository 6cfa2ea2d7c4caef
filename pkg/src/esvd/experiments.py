"""Desk-scale experiment harnesses and their CSV reports.

Two reproductions: a lossless round-trip trial over random (or supplied)
square matrices, and a budget-sweep simulation comparing reconstruction
fidelity of plain truncated SVD against the angle encoding at the
maximal rank each scheme affords.

Randomness comes from counter-based Philox 4x64 streams: substream
(i, j) is SeedSequence(entropy=seed, spawn_key=(i, j)), so runs are
reproducible across platforms and repetitions are independent.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from . import analysis, metrics, rotations, svd
from .codec import _fix_square_reflections
from .errors import ShapeError

DEFAULT_SEED = 20220414


@dataclass(frozen=True)
class SimulationConfig:
    m: int = 100
    n: int = 150
    value_low: float = 0.0
    value_high: float = 100.0
    budget_start: int = 1000
    budget_stop: int = 15000
    budget_step: int = 500
    repetitions: int = 50
    seed: int = DEFAULT_SEED

    def budgets(self) -> list[int]:
        return list(range(self.budget_start, self.budget_stop + 1, self.budget_step))


@dataclass(frozen=True)
class ExperimentRow:
    budget: int
    l_svd_max: int
    l_esvd_max: int
    rho_svd_mean: float
    rho_esvd_mean: float
    p_svd_mean: float
    p_esvd_mean: float


@dataclass(frozen=True)
class LosslessRow:
    l: int
    mae_u_mean: float
    mae_v_mean: float
    mae_x_mean: float


def _rng(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(key))
    return np.random.Generator(np.random.Philox(ss))


def _angle_roundtrip(u, v, sigma, m, n, l):
    """Re-orthonormalize, extract angles, reconstruct.  Returns the
    factors actually transformed and their recovered counterparts."""
    uo = rotations.orthonormalize(u)
    vo = rotations.orthonormalize(v)
    _fix_square_reflections(uo, vo, m, n, l)
    ue = rotations.reconstruct_orthonormal(m, l, rotations.givens_angles(uo))
    ve = rotations.reconstruct_orthonormal(n, l, rotations.givens_angles(vo))
    return uo, vo, ue, ve


def run_lossless_trial(
    count: int,
    size: int,
    l_list: list[int],
    seed: int = DEFAULT_SEED,
    planes: list[np.ndarray] | None = None,
) -> list[LosslessRow]:
    """Mean factor and reconstruction errors of the angle round trip.

    Trial matrices are seeded uniform draws on [0, 255], or the given
    image planes cropped to size x size.
    """
    matrices = []
    if planes is not None:
        if len(planes) < count:
            raise ShapeError(f"need {count} planes, got {len(planes)}")
        for plane in planes[:count]:
            if plane.shape[0] < size or plane.shape[1] < size:
                raise ShapeError(
                    f"plane {plane.shape} smaller than {size}x{size}"
                )
            matrices.append(np.asarray(plane, dtype=np.float64)[:size, :size])
    else:
        for t in range(count):
            matrices.append(_rng(seed, 0, t).uniform(0.0, 255.0, (size, size)))

    errs = {l: ([], [], []) for l in l_list}
    for x in matrices:
        f = svd.truncated_svd(x, max(l_list))
        for l in l_list:
            u, s, v = f.u[:, :l], f.sigma[:l], f.v[:, :l]
            uo, vo, ue, ve = _angle_roundtrip(u, v, s, size, size, l)
            x_hat = (u * s) @ v.T
            x_hat_e = (ue * s) @ ve.T
            errs[l][0].append(metrics.mae(uo, ue))
            errs[l][1].append(metrics.mae(vo, ve))
            errs[l][2].append(metrics.mae(x_hat, x_hat_e))
    rows = []
    for l in l_list:
        mu, mv, mx = (math.fsum(e) / count for e in errs[l])
        rows.append(LosslessRow(l=l, mae_u_mean=mu, mae_v_mean=mv, mae_x_mean=mx))
    return rows


def run_simulation(cfg: SimulationConfig) -> list[ExperimentRow]:
    """Budget sweep: fidelity at the maximal rank of each scheme.

    For every budget and repetition a fresh uniform matrix is compressed
    at l_svd_max (plain truncation) and pushed through the full angle
    round trip at l_esvd_max; correlations and coverage are averaged
    over repetitions with compensated summation.
    """
    rows = []
    for bi, budget in enumerate(cfg.budgets()):
        rep_budget = analysis.budget_report(budget, cfg.m, cfg.n)
        ls, le = rep_budget.l_svd_max, rep_budget.l_esvd_max
        rho_s, rho_e, p_s, p_e = [], [], [], []
        for t in range(cfg.repetitions):
            x = _rng(cfg.seed, 1 + bi, t).uniform(
                cfg.value_low, cfg.value_high, (cfg.m, cfg.n)
            )
            f = svd.truncated_svd(x, le)
            spectrum = svd.full_spectrum(x)
            x_svd = (f.u[:, :ls] * f.sigma[:ls]) @ f.v[:, :ls].T
            _, _, ue, ve = _angle_roundtrip(f.u, f.v, f.sigma, cfg.m, cfg.n, le)
            x_esvd = (ue * f.sigma) @ ve.T
            rho_s.append(metrics.pearson(x, x_svd))
            rho_e.append(metrics.pearson(x, x_esvd))
            p_s.append(metrics.coverage_p(spectrum, ls))
            p_e.append(metrics.coverage_p(spectrum, le))
        rows.append(
            ExperimentRow(
                budget=budget,
                l_svd_max=ls,
                l_esvd_max=le,
                rho_svd_mean=math.fsum(rho_s) / cfg.repetitions,
                rho_esvd_mean=math.fsum(rho_e) / cfg.repetitions,
                p_svd_mean=math.fsum(p_s) / cfg.repetitions,
                p_esvd_mean=math.fsum(p_e) / cfg.repetitions,
            )
        )
    return rows


def scatter_points(cfg: SimulationConfig, budget: int) -> list[tuple]:
    """(x, x_hat_svd, x_hat_esvd) triples for one seeded matrix."""
    rep = analysis.budget_report(budget, cfg.m, cfg.n)
    x = _rng(cfg.seed, 0, 0).uniform(cfg.value_low, cfg.value_high, (cfg.m, cfg.n))
    f = svd.truncated_svd(x, rep.l_esvd_max)
    ls = rep.l_svd_max
    x_svd = (f.u[:, :ls] * f.sigma[:ls]) @ f.v[:, :ls].T
    _, _, ue, ve = _angle_roundtrip(
        f.u, f.v, f.sigma, cfg.m, cfg.n, rep.l_esvd_max
    )
    x_esvd = (ue * f.sigma) @ ve.T
    return list(zip(x.ravel(), x_svd.ravel(), x_esvd.ravel()))


def write_lossless_csv(path, rows: list[LosslessRow]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["l", "mae_u_mean", "mae_v_mean", "mae_x_mean"])
        for row in rows:
            writer.writerow([row.l, row.mae_u_mean, row.mae_v_mean, row.mae_x_mean])


def write_simulation_csv(path, rows: list[ExperimentRow]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "M",
                "l_svd_max",
                "l_esvd_max",
                "rho_svd_mean",
                "rho_esvd_mean",
                "p_svd_mean",
                "p_esvd_mean",
            ]
        )
        for row in rows:
            writer.writerow(
                [
                    row.budget,
                    row.l_svd_max,
                    row.l_esvd_max,
                    row.rho_svd_mean,
                    row.rho_esvd_mean,
                    row.p_svd_mean,
                    row.p_esvd_mean,
                ]
            )
