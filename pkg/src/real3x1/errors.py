"""Shared error types for exact-arithmetic map experiments."""


class DomainError(ValueError):
    """A point fed to a map lies outside the map's domain."""


class PreconditionError(ValueError):
    """A caller-supplied object violates a documented precondition."""


class StructureError(RuntimeError):
    """An internally inconsistent structure that should be impossible."""
