"""Exception hierarchy shared across the engine."""


class GreenlinkError(Exception):
    """Base class for all engine errors."""


class ConfigError(GreenlinkError):
    """Invalid or inconsistent configuration input."""


class UnsupportedFadingError(GreenlinkError):
    """Operation called with a fading model it cannot handle."""


class InfeasibleTargetError(GreenlinkError):
    """Requested error rate cannot be met (inversion yields negative energy)."""


class NumericalError(GreenlinkError):
    """Quadrature or root finding failed to converge."""


class BracketError(NumericalError):
    """Root bracket does not contain a sign change."""


class NoFeasibleConstellationError(GreenlinkError):
    """No constellation size fits within the frame time budget."""
