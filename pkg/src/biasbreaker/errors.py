"""Exception hierarchy shared across the package."""


class BiasBreakerError(Exception):
    """Base class for all package errors."""


class GameInputError(BiasBreakerError, ValueError):
    """Bad game construction arguments (size, index, entry domain)."""


class GameFormatError(GameInputError):
    """A game document could not be parsed."""


class SpecError(BiasBreakerError, ValueError):
    """An opponent or exploiter spec string could not be resolved."""


class SequencingError(BiasBreakerError, RuntimeError):
    """An exploiter received an observation out of step with its own play."""


class ModelMismatchError(BiasBreakerError, RuntimeError):
    """Observed opponent behavior contradicts the exploiter's model."""


class CapacityError(BiasBreakerError, ValueError):
    """Hypothesis enumeration requested beyond the configured size guard."""


class ConditioningError(BiasBreakerError, ArithmeticError):
    """The ellipsoid shape matrix collapsed numerically."""
