class PolarBoundsError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(PolarBoundsError, ValueError):
    """Inputs violate a hypothesis of the theorem being applied."""


class UnsupportedDegreeError(PreconditionError):
    pass


class DomainError(PreconditionError):
    """A potential is not finite at a point where it must be evaluated."""


class NumericFailure(PolarBoundsError, ArithmeticError):
    pass


class DegenerateRuleError(PreconditionError):
    """Quadrature nodes coincide or a weight is not positive."""
