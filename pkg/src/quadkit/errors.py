"""Exception types shared across quadkit modules."""


class QuadkitError(Exception):
    """Base class for all quadkit errors."""


class ObjParseError(QuadkitError, ValueError):
    """Malformed OBJ content; carries the 1-based offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidMeshError(QuadkitError, ValueError):
    """Structurally invalid mesh (bad indices, repeated face vertices, ...)."""


class DegenerateGeometryError(QuadkitError, ValueError):
    """Geometry too degenerate for the requested operation."""


class UndefinedMetricError(QuadkitError, ValueError):
    """Metric has no defined value on this input (e.g. no quads for OEP)."""


class TokenSequenceError(QuadkitError, ValueError):
    """Token stream is structurally invalid for the tokenizer config."""


class AxisAmbiguityError(TokenSequenceError):
    """A coordinate token sits in a sequence position of a different axis."""
