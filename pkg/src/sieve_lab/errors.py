class SieveLabError(Exception):
    """Base class for library errors."""


class PreconditionError(SieveLabError, ValueError):
    """An input violates an operation's precondition (CLI exit code 2)."""

    def __init__(self, message, reason="precondition"):
        super().__init__(message)
        self.reason = reason


class ResourceCeilingError(SieveLabError):
    """A request exceeds a configured memory or size ceiling (CLI exit code 3)."""

    def __init__(self, message, gap_count=None, nbytes=None):
        super().__init__(message)
        self.gap_count = gap_count
        self.nbytes = nbytes
