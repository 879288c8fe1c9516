"""Exception types shared across the toolkit."""


class SarfError(Exception):
    """Base class for every error raised by sarfkit."""


class ParseError(SarfError):
    """Malformed interchange-file content."""


class NormalizationError(SarfError):
    """Nested-module merging produced an inconsistent member graph."""


class DomainError(SarfError):
    """Operation invoked on operands outside its domain."""
