"""Exception hierarchy. Each class carries the CLI exit code it maps to."""

from __future__ import annotations


class LxxQuoteError(Exception):
    exit_code = 1


class ConfigError(LxxQuoteError, ValueError):
    """Invalid parameters (n, k, paths, modes)."""

    exit_code = 1


class CanonError(ConfigError, KeyError):
    """A book name or BookId that is not part of the fixed canon."""

    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class BoundsError(ConfigError, IndexError):
    pass


class ParseError(LxxQuoteError):
    exit_code = 2

    def __init__(self, message: str, line: int | None = None, offset: int | None = None):
        where = f" (line {line}, column {offset})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.offset = offset


class DegenerateDataError(LxxQuoteError):
    exit_code = 3


class OutputError(LxxQuoteError, OSError):
    exit_code = 4
