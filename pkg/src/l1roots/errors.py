"""Exception types shared across the package."""


class L1RootsError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(L1RootsError, ValueError):
    pass


class InvalidCoverError(L1RootsError, ValueError):
    pass


class InvalidCurveError(L1RootsError, ValueError):
    pass


class ConfigError(L1RootsError, ValueError):
    pass


class MatrixParseError(L1RootsError, ValueError):
    pass


class ConvergenceError(L1RootsError, RuntimeError):
    """Power iteration ran out of budget; carries the last residual seen."""

    def __init__(self, message, residual=None, iterations=None, m=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations
        self.m = m
