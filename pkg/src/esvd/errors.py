"""Exception types shared across the package."""


class EsvdError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(EsvdError):
    """Matrix dimensions are inconsistent with the requested operation."""


class OrthonormalityViolation(EsvdError):
    """Input matrix fails the orthonormal-columns check."""


class ReflectionError(EsvdError):
    """Square orthonormal input with determinant -1.

    The rotation-angle parameterization covers SO(m) only, so a square
    reflection cannot be recovered from its angles.
    """


class LengthMismatch(EsvdError):
    """Angle vector length is inconsistent with the stated dimensions."""


class IndexOutOfRange(EsvdError):
    """Rotation index (k, i) outside the valid triangle."""


class RankOutOfRange(EsvdError):
    """Retained rank l outside 1..min(m, n)."""


class ConvergenceFailure(EsvdError):
    """SVD iteration did not converge."""


class BudgetOutOfRange(EsvdError):
    """Storage budget M outside 1..m*n."""


class BadMagic(EsvdError):
    """Container does not start with the expected magic bytes."""


class VersionUnsupported(EsvdError):
    """Container version not handled by this decoder."""


class Truncated(EsvdError):
    """Container ends before the header-declared payload."""


class InvariantViolation(EsvdError):
    """Decoded or constructed values break a structural invariant."""


class DegenerateVariance(EsvdError):
    """Pearson correlation requested for a constant matrix."""


class DegenerateSpectrum(EsvdError):
    """Coverage requested for an all-zero spectrum."""


class UnsupportedFormat(EsvdError):
    """Image format other than 8-bit binary PGM/PPM."""


class Malformed(EsvdError):
    """Image header or payload is structurally invalid."""


class ValueOutOfRange(EsvdError):
    """Pixel values outside 0..maxval."""
