"""Exception types shared across the package."""


class SingularMatrixError(ArithmeticError):
    """A matrix required to be invertible (or full column rank) is not."""


class FormatError(ValueError):
    """A text input (ARRV1/MATV1) could not be parsed.

    The message always starts with ``source:line:`` so callers can point the
    user at the offending spot.
    """
