"""Exception types raised across the package."""


class HsdpCachingError(Exception):
    """Base class for all package errors."""


class ParameterError(HsdpCachingError, ValueError):
    """Parameters are infeasible or degenerate (CLI exit code 2)."""


class DegenerateRecursion(ParameterError):
    """The tail recursion refers to itself (r = 1 with L != 2)."""


class ModulusTooSmall(ParameterError):
    """The modulus is below 2*phi + 1, so blocks would wrap around."""


class NonIntegralBlockDim(ParameterError):
    """The closed-form last block dimension is not an integer."""


class NoFeasiblePoint(ParameterError):
    """Even the all-ones block dimension vector violates the modulus bound."""


class RankDeficiency(HsdpCachingError):
    """The interfering channel rows span the whole antenna space."""

    def __init__(self, message, symbol=None, packet=None):
        super().__init__(message)
        self.symbol = symbol
        self.packet = packet


class DecodeFailure(HsdpCachingError):
    """A served user could not recover its payload within tolerance."""
