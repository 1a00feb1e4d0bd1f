"""Exception types shared across the package."""


class KoszulError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(KoszulError):
    """Malformed or out-of-contract input (bad indices, wrong degrees, ...)."""


class ResourceLimitError(KoszulError):
    """A configured size/budget cap was exceeded before an answer was reached."""
