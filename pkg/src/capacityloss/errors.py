"""Exception types raised by the library."""


class CapacityLossError(Exception):
    """Base class for all library errors."""


class QuadratureFailure(CapacityLossError):
    """Adaptive integration did not reach its tolerance within budget."""


class NoBracket(CapacityLossError):
    """The Lagrange multiplier could not be bracketed in the numeric range."""


class UnsupportedNoise(CapacityLossError):
    """The requested quantity has no implementation for this noise model."""


class InvalidOrder(CapacityLossError, ValueError):
    """QAM order is odd or out of range."""


class EmptyIntersection(CapacityLossError):
    """No discretization cell intersects the region."""


class InvalidRegion(CapacityLossError, ValueError):
    """Region parameters violate the support-set assumptions."""
