"""Exceptions shared across the package."""


class GuardExceeded(RuntimeError):
    """An operation was refused because it exceeds a resource guard."""


class FormatError(ValueError):
    """A serialized brace or solution file could not be parsed."""
