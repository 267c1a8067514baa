"""Exception types raised by the package.

All of them derive from :class:`ValueError` so callers that only care about
bad input can catch that.
"""


class OneBitError(ValueError):
    pass


class InvalidParameterError(OneBitError):
    """A scalar parameter is outside its admissible range."""


class DimensionMismatchError(OneBitError):
    """Array shapes do not agree."""


class DomainError(OneBitError):
    """A special function was evaluated outside its domain."""


class EmptyMeasurementError(OneBitError):
    pass


class ConfigError(OneBitError):
    """A sweep or CLI configuration is invalid."""
