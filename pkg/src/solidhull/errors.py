"""Exception types raised by solidhull."""


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class UnsupportedOrderError(DomainError):
    """Weight order b > 2; the block construction is not available there."""


class SolverError(RuntimeError):
    """The critical-radius solver failed to certify a root.

    The bracket state at the time of failure is kept on the instance.
    """

    def __init__(self, message, m=None, lo=None, hi=None, iterations=None):
        super().__init__(message)
        self.m = m
        self.lo = lo
        self.hi = hi
        self.iterations = iterations


class ParseError(ValueError):
    """Malformed coefficient input. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(ValueError):
    """Well-formed input that violates a sequence invariant."""


class RangeError(IndexError):
    """Index or block number outside the range a scheme was built for."""
