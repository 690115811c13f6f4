"""Exception hierarchy shared by the library and the CLI."""


class ShelfError(Exception):
    """Base class for every error raised by this package."""


class InputError(ShelfError, ValueError):
    """Malformed input: bad table shape, out-of-range entries, syntax errors."""


class PreconditionError(ShelfError, ValueError):
    """An operation was called on an object outside its domain."""


class BudgetExceeded(ShelfError):
    """A search hit its configured node or size cap before completing."""

    def __init__(self, message, nodes=None):
        super().__init__(message)
        self.nodes = nodes


class InvariantViolation(ShelfError, AssertionError):
    """A structural identity that must always hold was found to fail."""


class EnumerationError(ShelfError):
    """A parallel worker failed; the whole run is aborted."""
