"""Exception types shared across the toolkit."""


class ParameterError(ValueError):
    """An argument violates a documented precondition."""


class RangeError(ValueError):
    """An argument lies outside the numerically supported range."""


class ShapeMismatchError(ValueError):
    """Two sampled objects do not live on the same grid."""


class ResourceBudgetError(RuntimeError):
    """A symbolic computation exceeded its size budget."""


class ComputationError(RuntimeError):
    """A numerical pipeline produced non-finite intermediates."""


class AccuracyWarning(UserWarning):
    """A result was produced but an accuracy precondition is in doubt."""
