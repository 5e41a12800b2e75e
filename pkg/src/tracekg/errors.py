"""Exception hierarchy shared by all tracekg components.

Each error class carries the process exit code the CLI maps it to, so
failure classes stay machine-readable for scripting.
"""


class TraceKgError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ParseError(TraceKgError):
    """Malformed input text (triples document, nodeset XML, query, CSV, ledger)."""

    exit_code = 2

    def __init__(self, message: str, *, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)


class UnknownEntityError(TraceKgError):
    """A referenced entity is absent: unlinked machine, node without an id, missing process data."""

    exit_code = 3


class InvalidRangeError(TraceKgError):
    """A time range with start after end, or an empty process window."""

    exit_code = 4


class StorageError(TraceKgError):
    """Workspace or file-system level failure."""

    exit_code = 5


class ValidationError(TraceKgError):
    """A well-formed input that violates a model invariant (duplicate process, bad config)."""


class EvaluationError(TraceKgError):
    """Query evaluation failure: unbound variable where a value is required, type mismatch."""


class UnregisteredFunctionError(UnknownEntityError):
    """A query calls a property function that is not in the registry."""
