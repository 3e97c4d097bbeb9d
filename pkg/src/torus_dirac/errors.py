"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class RangeCapError(ValueError):
    """An argument exceeds the documented evaluation caps (order or magnitude)."""


class ConfigError(ValueError):
    """A run configuration is malformed or inconsistent."""


class AliasingError(ValueError):
    """An angular sample grid is too coarse for the requested mode truncation."""
