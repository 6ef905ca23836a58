"""Exception types shared by the series, oracle and convergence modules."""


class WSeriesError(Exception):
    """Base class for every error raised by this package."""


class DomainError(WSeriesError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class RayError(DomainError):
    """Wright omega was asked for a point on one of its singular rays."""


class SingularityError(DomainError):
    """The transformed variables are singular at the requested point."""


class ConfigError(WSeriesError, ValueError):
    """A setting, flag or precision mode is invalid."""


class ConvergenceFailure(WSeriesError, ArithmeticError):
    """An iteration did not converge within its iteration budget."""


class BracketError(WSeriesError, ArithmeticError):
    """A root could not be bracketed by a sign change."""


class IdentityFailure(WSeriesError, ArithmeticError):
    """A combinatorial identity did not hold exactly."""
