"""Exception types shared across the package."""


class ActantNetError(Exception):
    """Base class for all actantnet errors."""


class SchemaError(ActantNetError):
    """A column map does not fit the input (e.g. missing text column)."""


class CorpusError(ActantNetError):
    """Corpus-level integrity failure (e.g. duplicate tweet ids)."""


class ConfigError(ActantNetError):
    """Invalid pipeline configuration or config file."""


class DomainError(ActantNetError):
    """An operation was called outside its contract (e.g. layout of a
    disconnected graph, block extraction for an absent class)."""
