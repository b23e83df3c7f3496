"""Exception types raised across the package."""


class DiscordError(Exception):
    """Base class for all package errors."""


class ArgumentError(DiscordError, ValueError):
    """An argument is outside its allowed domain."""


class SizeError(DiscordError, ValueError):
    """A matrix would exceed the supported qubit count."""


class ContractError(DiscordError, ValueError):
    """An input violates a numerical precondition (e.g. Hermiticity)."""


class ResourceError(DiscordError, MemoryError):
    """An operation would exceed its configured memory budget."""


class UnsupportedError(DiscordError, LookupError):
    """The requested combination has no closed-form expression."""


class ConfigError(DiscordError, ValueError):
    """A sweep configuration is invalid."""
