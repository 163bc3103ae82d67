"""Errors raised by the clustering toolkit."""


class NotPositiveDefiniteError(ValueError):
    """A matrix expected to be symmetric positive definite failed to factor."""


class ConvergenceError(RuntimeError):
    """An iterative kernel hit its iteration limit before reaching tolerance."""


class DataFormatError(ValueError):
    """A manifest or matrix file could not be parsed; message carries file and line."""
