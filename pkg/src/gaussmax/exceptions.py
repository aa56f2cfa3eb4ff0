"""Exception hierarchy shared by every module in the package."""


class GaussMaxError(Exception):
    """Base class for all package errors."""


class ParameterError(GaussMaxError, ValueError):
    """Inputs violate a documented precondition."""


class QuadratureError(GaussMaxError, ArithmeticError):
    """An integral could not be brought within its absolute tolerance."""


class InconclusiveError(GaussMaxError, ArithmeticError):
    """A sign decision fell inside the numerical noise floor."""


class HypothesisViolation(ParameterError):
    """The hypothesis of the threshold corollary does not hold for the inputs."""


class TheoremViolation(GaussMaxError, AssertionError):
    """A numerically evaluated quantity contradicts the single-crossing theorem.

    Raised loudly and never caught inside the library: it means either the
    quadrature is broken or the mathematics is.
    """
