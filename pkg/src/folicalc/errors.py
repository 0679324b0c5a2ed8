"""Exception types shared by the whole package.

Everything raised on bad user input derives from FolicalcError so the
command-line front end can map it to a single "input error" exit code.
"""

from __future__ import annotations


class FolicalcError(Exception):
    """Base class for all errors raised by folicalc."""


class InputError(FolicalcError):
    """Invalid input: undeclared variables, bad indices, unknown names."""


class ChartMismatchError(InputError):
    """Operands live over incompatible charts, degrees, or kinds."""


class ParseError(InputError):
    """Positioned diagnostic produced by the text parsers."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"
