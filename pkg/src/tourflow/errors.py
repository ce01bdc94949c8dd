"""Exception types shared across the package."""


class TourflowError(Exception):
    """Base class for all tourflow errors."""


class ParseError(TourflowError):
    """Malformed or unreadable input data."""


class ConfigError(TourflowError):
    """Invalid or inconsistent run configuration."""


class ConvergenceError(TourflowError):
    """An iterative solver failed to converge within its iteration budget."""
