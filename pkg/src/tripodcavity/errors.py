"""Exception hierarchy shared by all modules."""


class TripodError(Exception):
    """Base class for every error raised by this package."""


class ComputationError(TripodError):
    """A numerical computation could not produce a trustworthy result."""


class DegenerateSteadyState(ComputationError):
    """The steady-state system is singular (the steady state is not unique)."""


class SingularWindow(ComputationError):
    """The weak-probe 3x3 system is singular."""


class NotConverged(ComputationError):
    """Time evolution reached ``t_max`` without reaching the tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class InvalidStep(ComputationError):
    """The requested integration step violates the stability precondition."""


class NonFinite(ComputationError):
    """A susceptibility evaluation produced a non-finite value."""

    def __init__(self, message: str, delta_p: float):
        super().__init__(message)
        self.delta_p = delta_p


class NegativeAbsorption(ComputationError):
    """An absorption coefficient below zero reached the cavity model."""


class DivisionByZero(ComputationError, ZeroDivisionError):
    """The linewidth-ratio denominator is not positive."""


class TooCoarse(ComputationError):
    """A peak is resolved by too few samples for a reliable FWHM."""

    def __init__(self, message: str, position: float, required_step: float):
        super().__init__(message)
        self.position = position
        self.required_step = required_step


class MissingPeak(ComputationError):
    """A configuration produced no qualifying transmission peak."""


class ConfigError(TripodError):
    """Base class for configuration problems (CLI exit status 1)."""


class ParseError(ConfigError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line} column {column}: {message}")
        self.line = line
        self.column = column


class ValidationError(ConfigError, ValueError):
    def __init__(self, field: str, constraint: str):
        super().__init__(f"{field}: {constraint}")
        self.field = field
        self.constraint = constraint
