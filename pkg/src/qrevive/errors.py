"""Exception types shared across the package.

Everything derives from QreviveError so callers can catch broadly; the
CLI additionally distinguishes validation errors (exit code 1) from
mathematical precondition failures (exit code 2).
"""


class QreviveError(Exception):
    """Base class for all package errors."""


class ValidationError(QreviveError, ValueError):
    """Bad arguments or malformed configuration (CLI exit code 1)."""


class MathError(QreviveError, ArithmeticError):
    """A mathematical precondition failed (CLI exit code 2)."""


# --- linear algebra ---

class ShapeMismatch(ValidationError):
    pass


class DimensionCap(ValidationError):
    """A Kronecker/tensor product would exceed the configured size cap."""


class DimensionMismatch(ValidationError):
    pass


class NonHermitian(ValidationError):
    pass


class NoConvergence(MathError):
    """An iterative eigensolver hit its iteration cap."""


class Singular(MathError):
    """Matrix inversion rejected: singular or condition number too large."""


# --- states ---

class BadIndex(ValidationError):
    pass


class RangeError(ValidationError):
    pass


class WrongDims(ValidationError):
    pass


class BadCut(ValidationError):
    pass


# --- channels / procedures ---

class NonInvertible(MathError):
    """Channel has no (numerically meaningful) linear inverse."""


class NotCP(ValidationError):
    """Operation requires a completely positive map."""


class BadTimes(ValidationError):
    pass


class BudgetTooSmall(ValidationError):
    """Search budget below the documented minimum."""
