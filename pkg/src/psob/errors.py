"""Exception types shared across the toolkit."""


class PsobError(Exception):
    """Base class for all toolkit errors."""


class InvalidGeometryError(PsobError):
    """A polygon or ring violates a geometric precondition."""


class InvalidArgumentError(PsobError):
    """An argument is outside its documented domain."""


class ParseError(PsobError):
    """A file could not be parsed; carries the byte offset when known."""

    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset


class ReferentialIntegrityError(PsobError):
    """An id reference does not resolve within its dataset split."""


class UndefinedIoUError(PsobError):
    """IoU requested for two empty masks."""


class SingularDesignError(PsobError):
    """Regression design matrix is rank deficient."""


class DesignError(PsobError):
    """ANOVA design is incomplete or degenerate."""
