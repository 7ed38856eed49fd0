"""Exception types shared across the toolkit."""


class LoadcastError(Exception):
    """Base class for all toolkit errors."""


class DataError(LoadcastError):
    """Malformed, empty, or insufficient input data."""


class ConfigError(LoadcastError):
    """Invalid configuration values or combinations."""


class ColdStartError(LoadcastError):
    """Not enough history to produce the requested output.

    Carries the first timestamp at which the request would become feasible.
    """

    def __init__(self, message: str, first_feasible=None):
        super().__init__(message)
        self.first_feasible = first_feasible


class UndefinedMetricError(LoadcastError):
    """Metric has no defined value for the given inputs (e.g. zero denominator)."""


class DivergenceError(LoadcastError):
    """Training produced a non-finite loss."""
