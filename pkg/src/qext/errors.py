"""Exception types shared across the package."""


class QextError(Exception):
    """Base class for all qext errors."""


class ParseError(QextError):
    """Malformed presentation text; carries line and column when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", col {column})" if column is not None else ")")
        super().__init__(message + loc)


class AdmissibilityError(ParseError):
    """Relation breaks admissibility (non-parallel terms or a term of length < 2)."""


class DimensionMismatch(QextError):
    """Incompatible shapes in a linear-algebra or module operation."""


class FieldSpecError(QextError):
    """Unusable ground-field specification (e.g. a composite modulus)."""


class NonFiniteDimensional(QextError):
    """Path enumeration exceeded its bound without stabilizing."""


class CutoffExceeded(QextError):
    """A consumer asked for resolution data beyond the computed cutoff."""


class WindowExceeded(CutoffExceeded):
    """A transfer intermediate left the materialized End-complex window."""


class PreconditionError(QextError):
    """An operation's structural precondition failed (wrong provenance, bad order, ...)."""
