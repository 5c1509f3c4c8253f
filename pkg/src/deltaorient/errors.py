"""Exception types shared across the package."""


class OrientationError(Exception):
    """Base class for all errors raised by deltaorient."""


class SelfLoop(OrientationError):
    pass


class DuplicateEdge(OrientationError):
    pass


class MissingEdge(OrientationError):
    pass


class StalePath(OrientationError):
    """A recorded slot hint no longer points at the expected arc."""


class BudgetExceeded(OrientationError):
    """A single update performed more flips than allowed."""


class TooLarge(OrientationError):
    pass


class TooDense(OrientationError):
    pass


class EmptyInput(OrientationError, ValueError):
    pass


class MissingCell(OrientationError):
    """A benchmark matrix lacks a value for some (algorithm, instance)."""


class ParseError(OrientationError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NegativeVertex(ParseError):
    pass
