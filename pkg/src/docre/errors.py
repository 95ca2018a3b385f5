"""Shared exception types."""


class DocreError(Exception):
    """Base class for all package errors."""


class ParseError(DocreError):
    """Structurally malformed input file or run log."""


class ValidationError(DocreError):
    """Input that parsed but violates an invariant."""


class ConfigError(DocreError):
    """Bad configuration key, value, or missing path."""


class BackendError(DocreError):
    """Completion engine failed permanently."""


class TransientBackendError(BackendError):
    """Completion engine failed after exhausting retries on retryable errors."""


class CacheMissError(BackendError):
    """Replay backend has no recorded response for the request key."""
