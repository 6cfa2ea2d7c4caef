"""Binary Netpbm (P5/P6) images as per-channel float matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import Malformed, ShapeError, UnsupportedFormat, ValueOutOfRange

_WHITESPACE = frozenset(b" \t\n\r\x0b\x0c")


@dataclass(frozen=True)
class ImagePlanes:
    """Decoded image: one height x width float matrix per channel."""

    width: int
    height: int
    channels: int
    planes: tuple[np.ndarray, ...]
    maxval: int = 255

    def __post_init__(self):
        if self.channels not in (1, 3) or len(self.planes) != self.channels:
            raise ShapeError(f"channel count {self.channels} unsupported")
        for plane in self.planes:
            if plane.shape != (self.height, self.width):
                raise ShapeError(
                    f"plane shape {plane.shape} != "
                    f"({self.height}, {self.width})"
                )


def read_pnm(data: bytes) -> ImagePlanes:
    """Decode a binary PGM (P5) or PPM (P6) byte stream.

    Header comments are accepted; maxval above 255 and the other Netpbm
    variants are rejected.
    """
    if len(data) < 2:
        raise Malformed("stream too short for a magic number")
    magic = data[:2]
    if magic in (b"P1", b"P2", b"P3", b"P4", b"P7"):
        raise UnsupportedFormat(f"Netpbm type {magic.decode()} not supported")
    if magic not in (b"P5", b"P6"):
        raise Malformed(f"not a Netpbm stream (starts with {magic!r})")
    channels = 1 if magic == b"P5" else 3

    pos = 2
    fields = []
    while len(fields) < 3:
        token, pos = _next_token(data, pos)
        fields.append(token)
    width, height, maxval = (_as_int(t) for t in fields)
    if maxval > 255:
        raise UnsupportedFormat(f"maxval {maxval} needs 16-bit samples")
    if width < 1 or height < 1 or maxval < 1:
        raise Malformed(f"bad header fields {width} {height} {maxval}")

    payload = data[pos:]
    expected = width * height * channels
    if len(payload) != expected:
        raise Malformed(f"payload is {len(payload)} bytes, expected {expected}")
    raster = np.frombuffer(payload, dtype=np.uint8).astype(np.float64)
    raster = raster.reshape(height, width, channels)
    planes = tuple(np.ascontiguousarray(raster[:, :, c]) for c in range(channels))
    return ImagePlanes(
        width=width, height=height, channels=channels, planes=planes, maxval=maxval
    )


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    # Skip whitespace and '#' comments, then read one token and the single
    # whitespace byte that terminates it.
    while True:
        if pos >= len(data):
            raise Malformed("header ended early")
        byte = data[pos]
        if byte == ord("#"):
            end = data.find(b"\n", pos)
            if end < 0:
                raise Malformed("unterminated header comment")
            pos = end + 1
        elif byte in _WHITESPACE:
            pos += 1
        else:
            break
    start = pos
    while pos < len(data) and data[pos] not in _WHITESPACE:
        pos += 1
    if pos >= len(data):
        raise Malformed("header ended early")
    return data[start:pos], pos + 1  # consume the terminating whitespace


def _as_int(token: bytes) -> int:
    try:
        return int(token)
    except ValueError as exc:
        raise Malformed(f"non-numeric header token {token!r}") from exc


def write_pnm(img: ImagePlanes) -> bytes:
    """Encode with a canonical header: magic, newline-separated fields."""
    for plane in img.planes:
        if not np.all(np.isfinite(plane)):
            raise ValueOutOfRange("plane contains non-finite values")
        if plane.min() < 0 or plane.max() > img.maxval:
            raise ValueOutOfRange(
                f"plane values outside 0..{img.maxval}; quantize first"
            )
        if np.any(plane != np.round(plane)):
            raise ValueOutOfRange("plane values must be integral; quantize first")
    magic = b"P5" if img.channels == 1 else b"P6"
    header = b"%s\n%d %d\n%d\n" % (magic, img.width, img.height, img.maxval)
    raster = np.stack(img.planes, axis=-1).astype(np.uint8)
    return header + raster.tobytes()


def quantize_plane(m: np.ndarray, maxval: int = 255) -> np.ndarray:
    """Round half away from zero, then clamp to [0, maxval]."""
    m = np.asarray(m, dtype=np.float64)
    rounded = np.sign(m) * np.floor(np.abs(m) + 0.5)
    return np.clip(rounded, 0.0, float(maxval))
