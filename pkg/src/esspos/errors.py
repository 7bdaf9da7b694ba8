"""Exception types shared across the package."""


class EssposError(Exception):
    """Base class for package-specific failures."""


class SymbolParseError(EssposError):
    """Raised when a symbol description cannot be parsed or is semantically invalid."""

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class CarlesonHypothesisError(EssposError):
    """The total-variation measure fails the Carleson embedding test.

    The boundary-limit classification pipeline requires that test; callers
    receive the diagnostic report through the ``report`` attribute.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SeriesTailError(EssposError):
    """The requested series tail bound cannot be certified with available data."""


class QuadratureError(EssposError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ConsistencyError(EssposError):
    """An internal cross-check that must hold to rounding has failed (bug signal)."""
