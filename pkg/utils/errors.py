from __future__ import annotations

from typing import Optional


class GraphError(ValueError):
    """Base class for every domain error raised by the library."""


class EdgeListParseError(GraphError):
    def __init__(self, message: str, line_number: int) -> None:
        super().__init__(f"line {line_number}: {message}")
        self.message = message
        self.line_number = line_number

    def __reduce__(self):
        return (type(self), (self.message, self.line_number))


class EmptyGraphError(GraphError):
    pass


class DisconnectedGraphError(GraphError):
    def __init__(self, message: str, node: Optional[int] = None) -> None:
        super().__init__(message)
        self.node = node


class InvalidParameterError(GraphError):
    pass


class DegenerateFitError(GraphError):
    pass


class UndefinedCorrelationError(GraphError):
    pass
