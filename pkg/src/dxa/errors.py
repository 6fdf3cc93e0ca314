"""Exception hierarchy shared by every module."""


class DxaError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(DxaError, ValueError):
    """Input data violates a precondition (length, finiteness, sign...)."""


class InvalidParameter(DxaError, ValueError):
    """A numeric parameter lies outside its admissible range."""


class DegenerateInput(DxaError, ValueError):
    """Input is well formed but the statistic is undefined (e.g. zero variance)."""


class ParseError(DxaError, ValueError):
    def __init__(self, message: str, row: int | None = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class IoError(DxaError, OSError):
    """Reading or writing a file failed."""
