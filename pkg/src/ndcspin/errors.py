"""Error types shared across the package."""


class DomainError(ValueError):
    """Input outside the domain a routine is defined on."""


class NumericError(RuntimeError):
    """A numerical procedure failed to reach its tolerance."""


class ResourceError(RuntimeError):
    """A computation would exceed a configured size or truncation budget."""


class CheckFailure(AssertionError):
    """A cross-check between two routes disagreed beyond tolerance."""
