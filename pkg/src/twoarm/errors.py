"""Exception hierarchy shared by every module."""


class ValidationError(ValueError):
    """A request or parameter violates one of its invariants."""


class ScenarioUnsupportedError(ValidationError):
    """The design/endpoint combination is not one of the supported scenarios."""


class NoFiniteSizeError(ArithmeticError):
    """No finite sample size satisfies the power condition."""


class PowerOutOfRangeError(ArithmeticError):
    """The supplied sample size is too small for any power in the search interval."""


class RootBracketError(ValueError):
    """The root finder was given an interval without a sign change."""
