"""Exception types shared across the package."""


class ResourceCapError(RuntimeError):
    """A configured size limit would be exceeded."""


class DimensionOverflowError(ValueError):
    """A complex contains simplices above the model dimension r."""


class RegimeError(ValueError):
    """Predictions requested outside a regime where they are defined."""


class RetryBudgetExhausted(RuntimeError):
    def __init__(self, message: str, worst_face=None, worst_count=None):
        super().__init__(message)
        self.worst_face = worst_face
        self.worst_count = worst_count


class LawViolation(AssertionError):
    """A deterministic per-sample inequality failed."""
