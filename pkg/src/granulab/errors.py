"""Exception types shared across granulab."""


class GranulabError(Exception):
    """Base class for every error raised by this package."""


class DomainError(GranulabError, ValueError):
    """An argument or parameter lies outside the operation's domain."""


class ValidationError(GranulabError, ValueError):
    """A value object (term set, configuration, table) violates an invariant."""


class UnknownTermError(GranulabError, LookupError):
    """A label or term-set name could not be resolved."""
