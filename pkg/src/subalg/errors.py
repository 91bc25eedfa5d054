"""Exception types shared across the package."""


class UsageError(ValueError):
    """An argument is out of range or inconsistent with the algebra it is used on."""


class CapacityError(RuntimeError):
    """A structure would exceed the configured materialization or search budget."""

    def __init__(self, message, required=None, bound=None):
        super().__init__(message)
        self.required = required
        self.bound = bound


class PreconditionError(ValueError):
    """An operation was called outside the hypotheses under which it is defined."""


class IntegrityError(RuntimeError):
    """A construction produced something inconsistent (usually: the input is not an SA)."""


class FormatError(ValueError):
    """A file does not follow the algebra interchange format."""
