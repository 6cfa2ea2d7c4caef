"""Truncated singular value decomposition and dense reconstruction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, RankOutOfRange, ShapeError

FACTOR_ORTHO_TOL = 1e-8


@dataclass(frozen=True)
class TruncatedSvd:
    """Rank-l factors: u (m x l), sigma (l, descending, >= 0), v (n x l)."""

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.u.shape[0], self.v.shape[0]

    @property
    def rank(self) -> int:
        return self.sigma.size


def _as_matrix(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise ShapeError("expected a 2-d array")
    if not np.all(np.isfinite(x)):
        raise ShapeError("matrix entries must be finite")
    return x


def truncated_svd(x: np.ndarray, l: int) -> TruncatedSvd:
    """Best rank-l factorization of x.

    Singular values come back descending and nonnegative; columns beyond
    the numerical rank are orthonormal null-space directions with sigma
    approximately zero, so any l up to min(m, n) is valid.
    """
    x = _as_matrix(x)
    m, n = x.shape
    if not 1 <= l <= min(m, n):
        raise RankOutOfRange(f"need 1 <= l <= {min(m, n)}, got {l}")
    try:
        u, s, vt = np.linalg.svd(x, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return TruncatedSvd(u[:, :l], s[:l], vt[:l].T)


def full_spectrum(x: np.ndarray) -> np.ndarray:
    """All min(m, n) singular values, descending."""
    x = _as_matrix(x)
    try:
        return np.linalg.svd(x, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc


def reconstruct(f: TruncatedSvd) -> np.ndarray:
    """Dense product u @ diag(sigma) @ v.T."""
    u = np.asarray(f.u, dtype=np.float64)
    sigma = np.asarray(f.sigma, dtype=np.float64)
    v = np.asarray(f.v, dtype=np.float64)
    if u.ndim != 2 or v.ndim != 2 or sigma.ndim != 1:
        raise ShapeError("factors have wrong dimensionality")
    if u.shape[1] != sigma.size or v.shape[1] != sigma.size:
        raise ShapeError(
            f"inconsistent factor shapes {u.shape}, {sigma.shape}, {v.shape}"
        )
    return (u * sigma) @ v.T
