"""Exception types shared across the package."""


class KrawlpError(Exception):
    """Base class for all package errors."""


class ResourceLimitError(KrawlpError):
    """An enumeration would exceed a configured size cap."""


class UnsupportedFieldError(KrawlpError):
    """The requested operation is not available for this field size."""


class LevelError(KrawlpError, ValueError):
    """The hierarchy level is outside the range a builder supports."""


class PreconditionError(KrawlpError, ValueError):
    """An input does not satisfy the documented precondition."""
