"""Exception hierarchy shared by every module."""

from __future__ import annotations


class DGCalcError(Exception):
    """Base class for all library errors."""


class FieldMismatchError(DGCalcError, TypeError):
    """Scalars or objects from two different fields were combined."""


class StructuralError(DGCalcError, ValueError):
    """Malformed input: dimension mismatch, dangling object, bad degree."""


class WindowError(DGCalcError, LookupError):
    """A query touched a degree outside the tabulated window."""


class PreconditionError(DGCalcError, ValueError):
    """An operation was called on data violating its stated precondition."""


class CapExceededError(DGCalcError, RuntimeError):
    """The word-length cap is too small for an otherwise exact tabulation."""


class InconsistentPresentationError(DGCalcError, ValueError):
    """The differential of a presentation is incompatible with d**2 = 0 or the relations."""


class TruncatedError(DGCalcError, RuntimeError):
    """An exact verdict was requested on a TRUNCATED tabulation."""


class ParseError(DGCalcError, ValueError):
    """Syntax or semantic error in an instance file; carries a position."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
