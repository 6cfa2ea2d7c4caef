"""Comparison metrics: MAE, Pearson correlation, spectrum coverage."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSpectrum,
    DegenerateVariance,
    RankOutOfRange,
    ShapeError,
)


@dataclass(frozen=True)
class MetricPair:
    mae: float
    rho: float


def _paired(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ShapeError(f"shape mismatch: {x.shape} vs {y.shape}")
    return x, y


def mae(x: np.ndarray, y: np.ndarray) -> float:
    """Mean absolute elementwise difference."""
    x, y = _paired(x, y)
    return float(np.mean(np.abs(x - y)))


def pearson(x: np.ndarray, y: np.ndarray) -> float:
    """Pearson correlation of the flattened entries (population moments)."""
    x, y = _paired(x, y)
    xf = x.ravel() - x.mean()
    yf = y.ravel() - y.mean()
    sx = np.sqrt(np.mean(xf * xf))
    sy = np.sqrt(np.mean(yf * yf))
    if sx == 0.0 or sy == 0.0:
        raise DegenerateVariance("constant matrix has no correlation")
    return float(np.mean(xf * yf) / (sx * sy))


def metric_pair(x: np.ndarray, y: np.ndarray) -> MetricPair:
    return MetricPair(mae=mae(x, y), rho=pearson(x, y))


def coverage_p(sigma_full: np.ndarray, l: int) -> float:
    """Fraction of the singular-value sum carried by the top l values."""
    sigma = np.asarray(sigma_full, dtype=np.float64)
    if sigma.ndim != 1 or sigma.size == 0:
        raise ShapeError("expected a nonempty 1-d spectrum")
    if not 1 <= l <= sigma.size:
        raise RankOutOfRange(f"need 1 <= l <= {sigma.size}, got {l}")
    total = float(np.sum(sigma))
    if total <= 0.0:
        raise DegenerateSpectrum("spectrum sums to zero")
    return float(np.sum(sigma[:l])) / total
