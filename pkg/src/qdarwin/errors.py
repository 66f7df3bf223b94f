"""Exception and warning types shared across the package."""


class QDarwinError(Exception):
    """Base class for all errors raised by qdarwin."""


class DomainError(QDarwinError, ValueError):
    """An argument lies outside the domain of the quantity being computed."""


class DegenerateInputError(DomainError):
    """The input is valid but the requested quantity is undefined there."""


class NoSolutionError(QDarwinError, ArithmeticError):
    """A root-finding problem has no solution in the search interval."""


class RegimeError(QDarwinError, ValueError):
    """The requested physical approximation is invalid for the scenario."""


class ScenarioError(QDarwinError, ValueError):
    """A scenario file is malformed or violates the scenario schema."""


class OracleSizeError(QDarwinError, ValueError):
    """An oracle model would exceed the dense-matrix size caps."""


class OracleMismatchError(QDarwinError, AssertionError):
    """Two routes for the same oracle quantity disagree beyond tolerance."""


class RegimeWarning(UserWarning):
    """Scenario parameters sit near the edge of an approximation's validity."""
