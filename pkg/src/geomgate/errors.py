"""Exception taxonomy shared across the package.

Every failure mode raised by library code derives from :class:`GeomgateError`,
so callers can catch one base class. The CLI maps these onto exit codes.
"""

from __future__ import annotations

__all__ = [
    "GeomgateError",
    "ParameterError",
    "RangeError",
    "DegenerateGapError",
    "InputError",
    "AccuracyError",
    "CapabilityError",
    "SamplingError",
    "CyclicityError",
    "ConfigError",
]


class GeomgateError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(GeomgateError, ValueError):
    """A physical or structural parameter is out of its allowed domain."""


class RangeError(GeomgateError, ValueError):
    """A time sample lies outside the schedule it was asked about."""


class DegenerateGapError(GeomgateError, ValueError):
    """Eigenframe requested at a point where the spectral gap closes."""


class InputError(GeomgateError, ValueError):
    """An array argument has the wrong shape, norm, or structure."""


class AccuracyError(GeomgateError, RuntimeError):
    """A numerical guarantee (unitarity, norm, step size) was violated."""


class CapabilityError(GeomgateError, ValueError):
    """The requested operation is outside what a gate family can realize."""


class SamplingError(GeomgateError, ValueError):
    """A discrete path is too coarse for the requested reconstruction."""


class CyclicityError(GeomgateError, ValueError):
    """Trajectory failed to close on itself within tolerance."""

    def __init__(self, defect: float, message: str | None = None):
        self.defect = float(defect)
        super().__init__(message or f"trajectory is not cyclic: defect {self.defect:.3e}")


class ConfigError(GeomgateError, ValueError):
    """A run configuration is malformed or inconsistent."""
