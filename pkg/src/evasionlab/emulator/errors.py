"""Exceptions raised by the emulator."""

from __future__ import annotations

from typing import TYPE_CHECKING, Optional

from ..js.source import SourceSpan

if TYPE_CHECKING:
    from .trace import ExecutionTrace


class BudgetExhausted(Exception):
    """Step budget or string-size cap exceeded.  Carries the partial trace."""

    def __init__(self, message: str, trace: Optional["ExecutionTrace"] = None):
        super().__init__(message)
        self.trace = trace


class ScriptError(RuntimeError):
    """An uncaught error inside emulated script code."""

    def __init__(self, kind: str, message: str, realm: str = "", span: Optional[SourceSpan] = None):
        loc = ""
        if span is not None:
            loc = f" at {span.source_id or '?'}:{span.start_offset}"
        super().__init__(f"{kind}: {message} [{realm}]{loc}")
        self.kind = kind
        self.message = message
        self.realm = realm
        self.span = span


class MalformedEscape(ValueError):
    pass


class CloneError(ValueError):
    pass


class SqlError(Exception):
    pass


class SqlSyntaxError(SqlError):
    pass


class UnknownTable(SqlError):
    pass


class ArityMismatch(SqlError):
    pass
