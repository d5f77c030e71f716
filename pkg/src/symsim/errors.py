"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Raised when an input object violates a documented precondition."""


class ToleranceError(ArithmeticError):
    """Raised when a numerical self-check exceeds its tolerance.

    This signals an internal inconsistency (e.g. a non-Hermitian matrix
    where Hermiticity is guaranteed by construction), not bad user input.
    """
