"""Exception types shared across the package.

Mathematical findings (a failing axiom, a defective induced operation) are
reported as data, never raised.  Exceptions are reserved for unusable input,
blown budgets, and internal consistency violations.
"""


class InputError(ValueError):
    """Malformed or out-of-contract input (CLI exit code 2)."""


class PreconditionError(InputError):
    """An operation was called outside its stated precondition."""


class DegenerateSystemError(InputError):
    """A multiplicative closure reached 0, so no system exists."""


class ResourceError(RuntimeError):
    """An enumeration exceeded its configured budget (CLI exit code 3)."""

    def __init__(self, message: str, required: int | None = None):
        super().__init__(message)
        self.required = required


class StructuralError(RuntimeError):
    """An internal invariant failed; indicates a construction bug."""
