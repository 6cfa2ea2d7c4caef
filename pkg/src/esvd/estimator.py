"""Scikit-learn compatible front end for the compression pipeline."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import codec, rotations


class EsvdCompressor(TransformerMixin, BaseEstimator):
    """Truncated SVD whose factors are stored as Givens rotation angles.

    Fitting compresses the training matrix; the learned right-singular
    basis is used to project (``transform``) and lift back
    (``inverse_transform``) like any linear dimensionality reducer.  The
    packed lossless representation of the training matrix is available
    as ``compressed_`` and the dense reconstruction via
    ``reconstruction()``.

    Parameters
    ----------
    n_components : int
        Retained rank l, 1 <= l <= min(n_samples, n_features).
    ortho_tol : float
        Orthonormality gate applied to the factors before angle
        extraction.
    """

    def __init__(self, n_components: int = 2, ortho_tol: float = rotations.ORTHO_TOL):
        self.n_components = n_components
        self.ortho_tol = ortho_tol

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64)
        self.n_features_in_ = X.shape[1]
        self.compressed_ = codec.compress(X, self.n_components, self.ortho_tol)
        v = rotations.reconstruct_orthonormal(
            self.compressed_.n, self.compressed_.l, self.compressed_.theta_v
        )
        self.components_ = v.T
        self.singular_values_ = self.compressed_.sigma.copy()
        return self

    def transform(self, X):
        check_is_fitted(self, "components_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, expected {self.n_features_in_}"
            )
        return X @ self.components_.T

    def inverse_transform(self, X):
        check_is_fitted(self, "components_")
        X = check_array(X, dtype=np.float64)
        return X @ self.components_

    def reconstruction(self) -> np.ndarray:
        """Dense rank-l approximation of the fitted matrix."""
        check_is_fitted(self, "compressed_")
        return codec.decompress(self.compressed_)

    def to_bytes(self) -> bytes:
        """Bit-exact container for the fitted compression."""
        check_is_fitted(self, "compressed_")
        return codec.encode(self.compressed_)
