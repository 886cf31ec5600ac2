"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Raised when an input fails a documented precondition."""


class NumericalError(RuntimeError):
    """Raised when a computed quantity violates a documented invariant."""
