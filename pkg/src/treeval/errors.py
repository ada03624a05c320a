"""Exception hierarchy shared by all modules."""


class TreevalError(Exception):
    """Base class for all library errors."""


class ParseError(TreevalError):
    """Malformed textual input (formulas, trees, handles, files)."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class ResourceBoundError(TreevalError):
    """A configured desk-scale bound (degree, poset size, ...) was exceeded."""


class PreconditionError(TreevalError):
    """An operation was called outside its stated precondition."""


class InvariantViolation(TreevalError):
    """An internal identity that should hold by theorem failed.

    Raised instead of silently returning wrong data; a CLI run maps this
    to its own exit code so harnesses can distinguish falsified identities
    from bad input.
    """


class UnsupportedHandleError(TreevalError):
    """A valuation handle combination outside the supported fragment."""
