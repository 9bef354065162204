"""Exception types shared across the package."""


class BeamloadError(Exception):
    """Base class for all package errors."""


class DimensionError(BeamloadError):
    """Array sizes do not match the grid they claim to live on."""


class ValidationError(BeamloadError):
    """Coefficient fields violate the admissibility bounds."""


class DivergenceError(BeamloadError):
    """A time-stepping run produced non-finite values."""


class ConfigError(BeamloadError):
    """A run configuration is malformed or references missing files."""
