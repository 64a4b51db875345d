"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class CapacityError(RuntimeError):
    """A combinatorial guard was exceeded (too many scenarios or vertices)."""


class EmptyResultError(RuntimeError):
    """A non-empty result was required but the computed set is empty."""
