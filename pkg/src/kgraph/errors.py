"""Exception hierarchy shared by every kgraph module."""

from __future__ import annotations


class KGraphError(Exception):
    """Base class for all errors raised by this package."""


class MalformedWordError(KGraphError, ValueError):
    pass


class BadIntervalError(KGraphError, ValueError):
    pass


class CompositionError(KGraphError, ValueError):
    """Adjacent edges of a path do not compose.

    ``index`` is the position of the second edge of the failing pair.
    """

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


class UnknownIdError(KGraphError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown id"


class MalformedCollectionError(KGraphError, ValueError):
    pass


class DomainError(KGraphError, ValueError):
    pass


class PreconditionError(KGraphError, ValueError):
    pass


class MissingSquareError(KGraphError):
    """No square in the collection owns a mixed-colour two-edge path."""

    def __init__(self, path: tuple[str, str]):
        super().__init__(f"no square owns the path {path[0]}.{path[1]}")
        self.path = path


class NonAssociativeError(KGraphError):
    """The square collection failed the cube condition during a fill.

    ``triple`` is a tri-coloured path whose two cube fillings disagree.
    """

    def __init__(self, message: str, triple: tuple[str, str, str]):
        super().__init__(message)
        self.triple = triple


class EnumerationLimitError(KGraphError):
    pass


class InconclusiveError(KGraphError):
    """A bounded search gave up before reaching a conclusion."""

    def __init__(self, message: str, detail: dict | None = None):
        super().__init__(message)
        self.detail = detail or {}


class SchemaError(KGraphError, ValueError):
    """Instance JSON does not match the schema. ``field`` is a dotted path."""

    def __init__(self, message: str, field: str = ""):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


class OracleOverflow(KGraphError):
    """A brute-force oracle hit its size cap; this is not an inequivalence."""

    def __init__(self, message: str, cap: int):
        super().__init__(message)
        self.cap = cap
