"""Exception types shared across the package."""


class SpinpermError(Exception):
    """Base class for all package errors."""


class ParseError(SpinpermError):
    """Malformed matrix input (ragged rows, bad literal, empty source)."""


class SizeGuardError(SpinpermError):
    """Requested size exceeds the desk-scale guard for this operation."""


class ZeroPivotError(SpinpermError):
    """A fixed-order reduction step would divide by a vanishing weight."""

    def __init__(self, message, entry=None):
        super().__init__(message)
        self.entry = entry


class OccupiedSiteError(SpinpermError):
    """Raising operator applied to an already occupied site."""


class LevelMismatchError(SpinpermError):
    """Level vector fed to a step expecting a different Hamming level."""


class RangeError(SpinpermError):
    """Operator power outside the supported range."""


class ZeroPermanentError(SpinpermError):
    """Spectral construction requires a nonzero permanent/determinant."""


class SpectralMismatchError(SpinpermError):
    """A spectral claim failed verification at the requested tolerance."""

    def __init__(self, message, k=None):
        super().__init__(message)
        self.k = k


class BlockStructureError(SpinpermError):
    """Power of the operator leaks amplitude across Hamming levels."""


class DimensionError(SpinpermError):
    """Vector or matrix dimension does not match the expected round."""


class ConsistencyError(SpinpermError):
    """An internal identity that should hold by construction failed."""
