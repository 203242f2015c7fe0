"""Exception types shared across the package."""


class ParseError(ValueError):
    """Raised on malformed expression text. Carries the byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class DomainError(ValueError):
    """A mathematically undefined evaluation: ln of a non-positive number,
    division by zero, 0 raised to a negative power, overflow, and so on.
    Raised instead of ever returning NaN or infinity."""


class PreconditionError(ValueError):
    """A check was asked to run on inputs that violate its hypotheses
    (negative function where non-negativity is required, domain too narrow
    for a y/m argument, ...). Distinct from a counterexample."""


class NonConvergenceError(ArithmeticError):
    """The adaptive integrator could not certify the requested tolerance,
    typically because the integrand diverges inside the interval."""
