"""Shared exception types."""


class GuardExceeded(RuntimeError):
    """A configured resource guard (size cap, family bound) was hit.

    The CLI maps this to exit code 2 to distinguish "too big" from "wrong".
    """


class PreconditionError(ValueError):
    """An operation was called on input that violates its stated precondition."""


class FormatError(ValueError):
    """Malformed external input (JSON poset files, fixture names, flags)."""
