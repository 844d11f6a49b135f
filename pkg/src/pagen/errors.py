"""Exception types raised across the package."""


class PagenError(Exception):
    """Base class for all package errors."""


class ConfigError(PagenError, ValueError):
    """Invalid configuration (seed spec, generation config, CLI model flags)."""


class TableError(PagenError, ValueError):
    """A weight table violates its bounds or normalization."""


class EdgeListError(PagenError, ValueError):
    """Malformed edge-list input. ``lineno`` is 1-based, or None for file-level errors."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class FitError(PagenError, ValueError):
    """Too few qualifying points for a log-log fit."""


class DomainError(PagenError, ValueError):
    """Closed-form evaluation requested outside its domain."""


class OracleTooLarge(PagenError, ValueError):
    """Exact enumeration refused because the instance is too big."""
