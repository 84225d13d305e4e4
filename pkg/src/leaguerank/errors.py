"""Exception types. The CLI maps each to a distinct exit status."""

from __future__ import annotations


class LeagueRankError(Exception):
    """Base class for all errors raised by leaguerank."""


class ConfigError(LeagueRankError, ValueError):
    """Invalid ranking or generator configuration."""


class DataError(LeagueRankError, ValueError):
    """Run data that cannot be parsed or does not form a usable design."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
