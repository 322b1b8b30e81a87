"""Exception types shared across the package."""


class DomainError(ValueError):
    """A numeric argument lies outside the region where the quantity is real and finite."""
