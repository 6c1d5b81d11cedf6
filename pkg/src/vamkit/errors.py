"""Exception hierarchy shared across the toolkit.

ValidationError covers malformed or out-of-contract inputs (bad field
values, unreadable files, schema violations); DomainError covers inputs
that are well-formed but economically inconsistent (e.g. depreciation
exceeding the replacement cost).  The CLI maps them to exit codes 2 and 1
respectively.
"""


class VamError(ValueError):
    """Base class for all toolkit errors."""


class ValidationError(VamError):
    """Input is malformed or violates a field-level constraint."""


class SchemaError(ValidationError):
    """A project or batch file violates the expected schema.

    The message always names the offending field path.
    """


class DomainError(VamError):
    """Input values are individually valid but jointly inconsistent."""
