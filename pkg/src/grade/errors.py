"""Exception hierarchy shared by every module."""


class GradeError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(GradeError, ValueError):
    """Input violates a documented precondition."""


class CapacityError(ValidationError):
    """Requested problem exceeds the simulator's qubit cap."""


class NotFoundError(GradeError, KeyError):
    """Named entity (e.g. a noise profile) is not registered."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class ParseError(ValidationError):
    """Malformed circuit text; carries the offending 1-based line number."""

    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line
