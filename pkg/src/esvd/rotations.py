"""Givens-angle parameterization of orthonormal column matrices.

An m x r matrix A with A.T @ A = I_r is fully determined (up to the
identity-block target form) by m*r - r*(r+1)/2 plane-rotation angles.
``givens_angles`` extracts them with row-local updates in O(m*r^2);
``reconstruct_orthonormal`` inverts the process exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    LengthMismatch,
    OrthonormalityViolation,
    ReflectionError,
    ShapeError,
)

ORTHO_TOL = 1e-10
RECON_TOL = 1e-12

# Below this, the accumulated partial norm is treated as exactly zero and
# the two-row rotation is applied directly instead of dividing by it.
_TINY = 1e-300


def n_angles(m: int, r: int) -> int:
    """Number of free rotation angles of an m x r orthonormal matrix."""
    return m * r - r * (r + 1) // 2


class Rotation(NamedTuple):
    c: float
    d: float
    s_new: float


def compute_rotation(s_prev: float, a: float) -> Rotation:
    """Single rotation folding element ``a`` into partial norm ``s_prev``.

    s_new = sqrt(s_prev**2 + a**2); c = s_prev/s_new, d = a/s_new.  The
    degenerate zero pair yields the identity rotation (c=1, d=0), the
    unique continuous extension.
    """
    if not (np.isfinite(s_prev) and np.isfinite(a)):
        raise ValueError("rotation inputs must be finite")
    s_new = float(np.hypot(s_prev, a))
    if s_new == 0.0:
        return Rotation(1.0, 0.0, 0.0)
    return Rotation(s_prev / s_new, a / s_new, s_new)


@dataclass(frozen=True)
class AngleSet:
    """Packed rotation angles of an m x r orthonormal column matrix.

    Packing is k-major, i-ascending: for column k = 1..r the angles for
    rows i = k+1..m appear consecutively (see ``codec.pack_index``).
    """

    m: int
    r: int
    angles: np.ndarray

    def __post_init__(self):
        angles = np.asarray(self.angles, dtype=np.float64)
        object.__setattr__(self, "angles", angles)
        if self.r < 1 or self.r > self.m:
            raise ShapeError(f"need 1 <= r <= m, got m={self.m}, r={self.r}")
        if angles.ndim != 1 or angles.size != n_angles(self.m, self.r):
            raise LengthMismatch(
                f"expected {n_angles(self.m, self.r)} angles for "
                f"{self.m}x{self.r}, got {angles.size}"
            )

    def __len__(self) -> int:
        return self.angles.size


def orthonormality_residual(a: np.ndarray) -> float:
    """max |(A.T A - I)_{ij}|, the orthonormality defect of A."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ShapeError("expected a 2-d array")
    m, r = a.shape
    if r > m:
        raise ShapeError(f"more columns than rows: {m}x{r}")
    gram = a.T @ a
    return float(np.abs(gram - np.eye(r)).max())


def givens_angles(a: np.ndarray, ortho_tol: float = ORTHO_TOL) -> AngleSet:
    """Extract the packed rotation angles of an orthonormal column matrix.

    Performs the forward sweep column by column, touching only the rows a
    rotation acts on; no m x m rotation matrix is ever formed.  Raises
    OrthonormalityViolation when the input fails the residual check and
    ReflectionError for square inputs with determinant -1, which the
    angle parameterization cannot represent.
    """
    a = np.array(a, dtype=np.float64)
    if a.ndim != 2:
        raise ShapeError("expected a 2-d array")
    m, r = a.shape
    if r > m:
        raise ShapeError(f"more columns than rows: {m}x{r}")
    resid = orthonormality_residual(a)
    if resid > ortho_tol:
        raise OrthonormalityViolation(
            f"orthonormality residual {resid:.3e} exceeds tolerance {ortho_tol:.3e}"
        )
    if m == r:
        sign, _ = np.linalg.slogdet(a)
        if sign < 0:
            raise ReflectionError(
                "square orthonormal matrix has determinant -1; only "
                "rotations are representable by the angle set"
            )

    angles = np.empty(n_angles(m, r))
    pos = 0
    for k in range(r):
        v = a[k:, k].copy()
        nloc = v.size - 1
        if nloc == 0:
            continue
        # Partial norms s_i = sqrt(sum of squares through row i); the head
        # keeps its sign, as the sweep prescribes.
        s = np.sqrt(np.cumsum(v * v))
        s[0] = v[0]
        s_prev, s_cur = s[:-1], s[1:]
        nonzero = s_cur > 0.0
        c = np.where(nonzero, s_prev / np.where(nonzero, s_cur, 1.0), 1.0)
        d = np.where(nonzero, v[1:] / np.where(nonzero, s_cur, 1.0), 0.0)
        theta = np.arctan2(d, c)
        theta[theta == -np.pi] = np.pi  # keep the half-open (-pi, pi] range
        angles[pos : pos + nloc] = theta
        pos += nloc

        b = a[k:, k + 1 :]
        if b.shape[1]:
            # Row i update: -d_i/s_{i-1} * (prefix sum of v_p * row_p) + c_i * row_i.
            # The prefix sums amortize the whole column sweep into one cumsum.
            t = np.cumsum(v[:, None] * b, axis=0)[:-1]
            safe = np.abs(s_prev) > _TINY
            factor = np.where(safe, d / np.where(safe, s_prev, 1.0), 0.0)
            b_new = -factor[:, None] * t + c[:, None] * b[1:]
            if not safe.all():
                # Zero partial norm: every prior rotation was the identity,
                # so rotate against the untouched row k directly.
                bad = ~safe
                b_new[bad] = -d[bad, None] * b[0] + c[bad, None] * b[1:][bad]
            b[1:] = b_new
        a[k, :] = 0.0
        a[k, k] = 1.0
        a[k + 1 :, k] = 0.0
    return AngleSet(m, r, angles)


def reconstruct_orthonormal(m: int, r: int, theta: AngleSet | np.ndarray) -> np.ndarray:
    """Rebuild the orthonormal matrix from its packed angle set.

    Applies the transposed rotations to [I_r; 0] in reverse sweep order
    (k = r..1, i = m..k+1), touching two rows per step.  The output has
    orthonormal columns for any finite angle vector.
    """
    if isinstance(theta, AngleSet):
        if (theta.m, theta.r) != (m, r):
            raise LengthMismatch(
                f"angle set is for {theta.m}x{theta.r}, requested {m}x{r}"
            )
        angles = theta.angles
    else:
        angles = np.asarray(theta, dtype=np.float64)
    if r < 1 or r > m:
        raise ShapeError(f"need 1 <= r <= m, got m={m}, r={r}")
    if angles.ndim != 1 or angles.size != n_angles(m, r):
        raise LengthMismatch(
            f"expected {n_angles(m, r)} angles for {m}x{r}, got {angles.size}"
        )
    if not np.all(np.isfinite(angles)):
        raise ValueError("angles must be finite")

    cos = np.cos(angles)
    sin = np.sin(angles)
    b = np.zeros((m, r))
    b[np.arange(r), np.arange(r)] = 1.0
    for k in range(r - 1, -1, -1):
        base = k * m - k * (k + 1) // 2
        # During sweep k every touched row has support in columns k..r-1.
        row_k = b[k, k:].copy()
        for i in range(m - 1, k, -1):
            idx = base + (i - k - 1)
            c, d = cos[idx], sin[idx]
            row_i = b[i, k:].copy()
            b[i, k:] = d * row_k + c * row_i
            row_k = c * row_k - d * row_i
        b[k, k:] = row_k
    return b


def orthonormalize(a: np.ndarray) -> np.ndarray:
    """Gram-Schmidt with reorthogonalization over the columns of A.

    Two projection passes per column ("twice is enough") tighten
    nearly-orthonormal factors such as SVD output to the residual level
    ``givens_angles`` expects.  Columns of zero norm are replaced by unit
    vectors orthogonal to the span already built.
    """
    a = np.array(a, dtype=np.float64)
    m, r = a.shape
    if r > m:
        raise ShapeError(f"more columns than rows: {m}x{r}")
    q = a
    for j in range(r):
        col = q[:, j]
        for _ in range(2):
            if j:
                col -= q[:, :j] @ (q[:, :j].T @ col)
        norm = np.linalg.norm(col)
        if norm < 1e-12:
            q[:, j] = _null_direction(q[:, :j], m)
        else:
            q[:, j] = col / norm
    return q


def _null_direction(basis: np.ndarray, m: int) -> np.ndarray:
    for axis in range(m):
        cand = np.zeros(m)
        cand[axis] = 1.0
        cand -= basis @ (basis.T @ cand)
        norm = np.linalg.norm(cand)
        if norm > 0.5:
            return cand / norm
    raise ShapeError("no orthogonal direction left")  # pragma: no cover


def random_orthonormal(m: int, r: int, rng: np.random.Generator) -> np.ndarray:
    """Seeded random point on the Stiefel manifold (QR of a Gaussian).

    Square draws are sign-fixed to determinant +1 so they stay inside the
    representable set.
    """
    q, rr = np.linalg.qr(rng.standard_normal((m, r)))
    q *= np.sign(np.where(np.diag(rr) == 0, 1.0, np.diag(rr)))
    if m == r and np.linalg.slogdet(q)[0] < 0:
        q[:, -1] *= -1.0
    return q
