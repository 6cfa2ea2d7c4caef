"""Compressed representation, end-to-end pipeline and on-disk container.

A compression of an m x n matrix at rank l stores exactly
(m + n - l) * l numbers: l singular values plus the two packed angle
sets.  The ``.esvd`` container serializes them bit-exactly; multi-channel
images concatenate one container per channel behind a channel-count byte.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass, field

import numpy as np

from . import rotations, svd
from .errors import (
    BadMagic,
    IndexOutOfRange,
    InvariantViolation,
    ReflectionError,
    Truncated,
    VersionUnsupported,
)
from .rotations import AngleSet

MAGIC = b"ESVD"
VERSION = 1

# Source-format bits so a decompressor can reproduce the original file kind.
FLAG_SOURCE_CSV = 0x0001
_KNOWN_FLAGS = FLAG_SOURCE_CSV

_HEADER = struct.Struct("<4sHHQQQ")
_CRC = struct.Struct("<I")


def pack_index(k: int, i: int, m: int, r: int) -> int:
    """Offset of angle (k, i) in the packed vector; k, i are 1-based.

    Layout is k-major, i-ascending: offset = sum_{j<k}(m - j) + (i - k - 1).
    """
    if not (1 <= k <= r and k < i <= m):
        raise IndexOutOfRange(f"(k={k}, i={i}) outside triangle for m={m}, r={r}")
    return (k - 1) * m - k * (k - 1) // 2 + (i - k - 1)


@dataclass(frozen=True)
class EsvdCompressed:
    """Full compressed representation (m, n, l, sigma, theta_u, theta_v)."""

    m: int
    n: int
    l: int
    sigma: np.ndarray
    theta_u: AngleSet
    theta_v: AngleSet
    flags: int = field(default=0, compare=False)

    def __post_init__(self):
        sigma = np.asarray(self.sigma, dtype=np.float64)
        object.__setattr__(self, "sigma", sigma)
        if not 1 <= self.l <= min(self.m, self.n):
            raise InvariantViolation(
                f"rank {self.l} outside 1..min({self.m}, {self.n})"
            )
        if sigma.ndim != 1 or sigma.size != self.l:
            raise InvariantViolation("sigma length differs from rank")
        if not np.all(np.isfinite(sigma)):
            raise InvariantViolation("sigma must be finite")
        if sigma.size and (sigma[-1] < 0 or np.any(np.diff(sigma) > 0)):
            raise InvariantViolation("sigma must be descending and nonnegative")
        if (self.theta_u.m, self.theta_u.r) != (self.m, self.l):
            raise InvariantViolation("theta_u inconsistent with (m, l)")
        if (self.theta_v.m, self.theta_v.r) != (self.n, self.l):
            raise InvariantViolation("theta_v inconsistent with (n, l)")

    @property
    def stored_numbers(self) -> int:
        """Numbers kept besides fixed metadata: (m + n - l) * l."""
        return self.l + len(self.theta_u) + len(self.theta_v)


def compress(
    x: np.ndarray, l: int, ortho_tol: float = rotations.ORTHO_TOL, flags: int = 0
) -> EsvdCompressed:
    """Truncated SVD, factor re-orthonormalization, then angle extraction."""
    f = svd.truncated_svd(x, l)
    u = rotations.orthonormalize(f.u)
    v = rotations.orthonormalize(f.v)
    m, n = f.shape
    _fix_square_reflections(u, v, m, n, l)
    return EsvdCompressed(
        m=m,
        n=n,
        l=l,
        sigma=f.sigma,
        theta_u=rotations.givens_angles(u, ortho_tol),
        theta_v=rotations.givens_angles(v, ortho_tol),
        flags=flags,
    )


def _fix_square_reflections(u, v, m, n, l):
    # Negating the last column of both factors preserves u @ diag(s) @ v.T
    # and flips both determinants; only square factors constrain the sign.
    flip_u = l == m and np.linalg.slogdet(u)[0] < 0
    flip_v = l == n and np.linalg.slogdet(v)[0] < 0
    if flip_u != flip_v and l == m == n:
        raise ReflectionError(
            "full-rank square matrix with negative determinant is not "
            "representable by rotation angles"
        )
    if flip_u or flip_v:
        u[:, -1] *= -1.0
        v[:, -1] *= -1.0


def decompress(c: EsvdCompressed) -> np.ndarray:
    """Rebuild both factors from their angles and form u @ diag(sigma) @ v.T."""
    u = rotations.reconstruct_orthonormal(c.m, c.l, c.theta_u)
    v = rotations.reconstruct_orthonormal(c.n, c.l, c.theta_v)
    return (u * c.sigma) @ v.T


def encode(c: EsvdCompressed) -> bytes:
    """Serialize to the .esvd container (little-endian, CRC32 trailer)."""
    parts = [
        _HEADER.pack(MAGIC, VERSION, c.flags, c.m, c.n, c.l),
        c.sigma.astype("<f8").tobytes(),
        c.theta_u.angles.astype("<f8").tobytes(),
        c.theta_v.angles.astype("<f8").tobytes(),
    ]
    payload = b"".join(parts)
    return payload + _CRC.pack(zlib.crc32(payload))


def decode(data: bytes) -> EsvdCompressed:
    """Parse one .esvd container, validating every structural invariant."""
    c, consumed = _decode_block(data, 0)
    if consumed != len(data):
        raise InvariantViolation(
            f"{len(data) - consumed} trailing bytes after container"
        )
    return c


def _decode_block(data: bytes, offset: int) -> tuple[EsvdCompressed, int]:
    view = memoryview(data)[offset:]
    if len(view) < _HEADER.size:
        raise Truncated("container shorter than fixed header")
    magic, version, flags, m, n, l = _HEADER.unpack_from(view)
    if magic != MAGIC:
        raise BadMagic(f"expected {MAGIC!r}, found {bytes(magic)!r}")
    if version != VERSION:
        raise VersionUnsupported(f"container version {version}")
    if flags & ~_KNOWN_FLAGS:
        raise VersionUnsupported(f"unknown flag bits 0x{flags:04x}")
    if m < 1 or n < 1 or not 1 <= l <= min(m, n):
        raise InvariantViolation(f"bad dimensions m={m}, n={n}, l={l}")
    cu = rotations.n_angles(m, l)
    cv = rotations.n_angles(n, l)
    body = _HEADER.size + 8 * (l + cu + cv)
    total = body + _CRC.size
    if len(view) < total:
        raise Truncated(f"need {total} bytes, have {len(view)}")
    (crc_stored,) = _CRC.unpack_from(view, body)
    if crc_stored != zlib.crc32(view[:body]):
        raise InvariantViolation("payload checksum mismatch")
    arr = np.frombuffer(view, dtype="<f8", count=l + cu + cv, offset=_HEADER.size)
    sigma = arr[:l].copy()
    tu = arr[l : l + cu].copy()
    tv = arr[l + cu :].copy()
    for name, angles in (("theta_u", tu), ("theta_v", tv)):
        if not np.all(np.isfinite(angles)):
            raise InvariantViolation(f"{name} contains non-finite angles")
        if angles.size and (angles.min() <= -np.pi or angles.max() > np.pi):
            raise InvariantViolation(f"{name} angles outside (-pi, pi]")
    c = EsvdCompressed(
        m=m,
        n=n,
        l=l,
        sigma=sigma,
        theta_u=AngleSet(m, l, tu),
        theta_v=AngleSet(n, l, tv),
        flags=flags,
    )
    return c, offset + total


def encode_image(channels: list[EsvdCompressed]) -> bytes:
    """Channel-count byte followed by one container per channel."""
    if len(channels) not in (1, 3):
        raise InvariantViolation(f"expected 1 or 3 channels, got {len(channels)}")
    return bytes([len(channels)]) + b"".join(encode(c) for c in channels)


def decode_image(data: bytes) -> list[EsvdCompressed]:
    if not data:
        raise Truncated("empty image container")
    count = data[0]
    if count not in (1, 3):
        raise InvariantViolation(f"channel count {count} not in (1, 3)")
    channels = []
    offset = 1
    for _ in range(count):
        c, offset = _decode_block(data, offset)
        channels.append(c)
    if offset != len(data):
        raise InvariantViolation(
            f"{len(data) - offset} trailing bytes after last channel"
        )
    return channels
