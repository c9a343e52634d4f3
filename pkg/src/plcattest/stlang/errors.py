"""Exception types raised by the dialect front end and interpreter."""

from __future__ import annotations


class StlangError(Exception):
    """Base class for all dialect errors."""


class ParseError(StlangError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class TypecheckError(StlangError):
    """Static type violation (undeclared ident, kind mismatch, bad write)."""

    def __init__(self, message: str, ident: str | None = None,
                 expected: object = None, found: object = None):
        super().__init__(message)
        self.ident = ident
        self.expected = expected
        self.found = found


class EvalError(StlangError):
    """Runtime violation during a scan (enum value out of range)."""
