"""Exception types shared across the toolkit."""

from __future__ import annotations


class PathdecompError(Exception):
    """Base class for all toolkit errors."""


class ParseError(PathdecompError):
    """Malformed input file. Carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GenerationError(PathdecompError):
    """A random generator exhausted its retry budget."""


class PreconditionError(PathdecompError):
    """An operation's stated precondition failed its audit."""


class BudgetError(PathdecompError):
    """An oracle or search exceeded its configured budget."""


class PackingError(PathdecompError):
    """The complete-graph path packer could not place every requested path."""


class CertificateError(PathdecompError):
    """A certified property was contradicted by a later computation."""


class PartitionError(PathdecompError):
    """The connected-partition audits could not be satisfied."""
