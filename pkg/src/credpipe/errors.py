"""Exception types shared across the pipeline.

The CLI maps these onto exit codes: validation problems exit 2,
referential-integrity problems exit 3.
"""


class CredpipeError(Exception):
    """Base class for all pipeline errors."""


class DegenerateTextError(CredpipeError):
    """Raised when a metric is asked for on text that cannot support it
    (no words, no sentences)."""


class DimensionMismatchError(CredpipeError):
    """Raised when two vectors of unequal or zero dimension are compared."""


class ValidationError(CredpipeError):
    """A record or value failed schema/range validation.

    Carries optional record/field context so load errors can name the
    offending row.
    """

    def __init__(self, message, record=None, field=None):
        parts = [message]
        if record is not None:
            parts.append(f"record={record!r}")
        if field is not None:
            parts.append(f"field={field!r}")
        super().__init__(" ".join(parts))
        self.record = record
        self.field = field


class ReferentialIntegrityError(CredpipeError):
    """A cross-record reference did not resolve (e.g. orphan tweets)."""

    def __init__(self, message, orphans=()):
        super().__init__(message)
        self.orphans = tuple(orphans)


class ConfigError(CredpipeError):
    """Pipeline configuration is missing, malformed, or inconsistent."""
