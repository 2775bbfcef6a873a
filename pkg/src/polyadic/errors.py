"""Exception types shared across the package."""


class PolyadicError(Exception):
    """Base class for all package-specific errors."""


class CapacityError(PolyadicError):
    """A requested table or enumeration exceeds the configured budget."""


class RankOutOfRange(PolyadicError):
    """The requested position does not exist in the tower."""


class MaximalPath(PolyadicError):
    """The path is maximal throughout its knowable extent; it has no successor."""


class MinimalPath(PolyadicError):
    """The path is minimal throughout its knowable extent; it has no predecessor."""


class HorizonExhausted(PolyadicError):
    """The search hit the configured maximum level before finding a pivot."""


class PrefixExhausted(PolyadicError):
    """A path prefix ran out of letters and has no extension policy."""


class NoRoot(PolyadicError):
    """The weight equation has no admissible root for the given parameters."""


class DegenerateCurve(PolyadicError):
    """The fluctuation numerator vanishes identically on the node grid."""


class NoConvergence(PolyadicError):
    """Consecutive candidate curves never came within tolerance.

    The sup-distance series seen so far is attached as ``distances``.
    """

    def __init__(self, message, distances=None):
        super().__init__(message)
        self.distances = list(distances or [])


class DivisionByZeroJet(PolyadicError):
    """Reciprocal of a truncated series with zero constant term."""
