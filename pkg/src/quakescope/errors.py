"""Shared exception types."""


class QuakescopeError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(QuakescopeError):
    """A record file could not be parsed.

    Carries enough context (path, line, field) to point at the offending
    spot in the input file.
    """

    def __init__(self, message, path=None, line=None, field=None):
        parts = []
        if path is not None:
            parts.append(str(path))
        if line is not None:
            parts.append(f"line {line}")
        if field is not None:
            parts.append(f"field {field!r}")
        prefix = ": ".join(parts)
        super().__init__(f"{prefix}: {message}" if prefix else message)
        self.path = path
        self.line = line
        self.field = field


class ValidationError(QuakescopeError):
    """Input data violates a structural invariant."""


class ConfigError(QuakescopeError):
    """A configuration file or override set is invalid."""
