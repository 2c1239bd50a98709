"""
Error hierarchy for tablesmith.

Every error carries a machine-readable ``kind`` and the process exit code the
CLI should use when it escapes a command.
"""
from typing import Any, Dict, List, Optional, Tuple


class TablesmithError(Exception):
    """Base class for all toolkit errors."""

    kind = "TablesmithError"
    exit_code = 1

    def __init__(self, message: str = "", **details: Any):
        super().__init__(message or self.kind)
        self.message = message or self.kind
        self.details = details

    def to_error_object(self) -> Dict[str, Any]:
        """Machine-readable form printed on stderr by the CLI."""
        return {"error": self.kind, "message": self.message, "details": _jsonable(self.details)}


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if hasattr(value, "model_dump"):
        return value.model_dump(mode="json")
    return str(value)


# ============================================
# Configuration
# ============================================

class ConfigError(TablesmithError):
    kind = "ConfigError"
    exit_code = 2


class SchemaError(TablesmithError):
    """Span matrices of a TableSchema do not tile the rectangle."""

    kind = "SchemaError"

    def __init__(self, message: str, anchor: Optional[Tuple[int, int]] = None, **details: Any):
        super().__init__(message, anchor=anchor, **details)
        self.anchor = anchor


# ============================================
# Table parsing
# ============================================

class TableParseError(TablesmithError):
    """HTML could not be resolved into a TableGrid.

    ``defects`` holds every defect found, not only the one that named the
    exception class.
    """

    kind = "TableParseError"

    def __init__(self, message: str, defects: Optional[List[Any]] = None, **details: Any):
        super().__init__(message, **details)
        self.defects = list(defects or [])


class RaggedRows(TableParseError):
    kind = "RaggedRows"


class OverlappingSpans(TableParseError):
    kind = "OverlappingSpans"


class SpanOutOfBounds(TableParseError):
    kind = "SpanOutOfBounds"


class DisallowedTag(TableParseError):
    kind = "DisallowedTag"


class MissingTable(TableParseError):
    kind = "MissingTable"


class MalformedMarkup(TableParseError):
    kind = "MalformedMarkup"


class EmptyStructure(TableParseError):
    kind = "EmptyStructure"


PARSE_ERRORS = {
    cls.kind: cls
    for cls in (RaggedRows, OverlappingSpans, SpanOutOfBounds, DisallowedTag,
                MissingTable, MalformedMarkup, EmptyStructure)
}


class InvalidTableError(TablesmithError):
    """Wraps the ValidationReport of a table that cannot be scored."""

    kind = "InvalidTableError"

    def __init__(self, message: str, report: Any = None):
        super().__init__(message, report=report)
        self.report = report


# ============================================
# Providers
# ============================================

class ProviderError(TablesmithError):
    kind = "ProviderError"

    def __init__(self, message: str, retryable: bool = False, partial: Any = None, **details: Any):
        super().__init__(message, retryable=retryable, **details)
        self.retryable = retryable
        self.partial = partial


class ResponseFormatError(ProviderError):
    kind = "ResponseFormatError"


class StructureDriftError(ProviderError):
    """A filled table no longer has the logical row widths of its skeleton."""

    kind = "StructureDriftError"

    def __init__(self, message: str, width_diff: Optional[List[Dict[str, Any]]] = None, **details: Any):
        super().__init__(message, retryable=False, width_diff=width_diff or [], **details)
        self.width_diff = width_diff or []


class RankerError(TablesmithError):
    kind = "RankerError"


class GenerationFailed(TablesmithError):
    kind = "GenerationFailed"


class DegenerateInput(TablesmithError):
    kind = "DegenerateInput"


# ============================================
# Augmentation
# ============================================

class TransformError(TablesmithError):
    """A transform was rejected; ``rectangle`` is the blocking merged cell."""

    kind = "TransformError"

    def __init__(self, message: str, rectangle: Optional[Tuple[int, int, int, int]] = None, **details: Any):
        super().__init__(message, rectangle=rectangle, **details)
        self.rectangle = rectangle


class DeleteBreaksSpan(TransformError):
    kind = "DeleteBreaksSpan"


class SwapIntersectsSpan(TransformError):
    kind = "SwapIntersectsSpan"


class OutOfBounds(TransformError):
    kind = "OutOfBounds"


class InfeasibleTransform(TransformError):
    kind = "InfeasibleTransform"


# ============================================
# Manifests
# ============================================

class ManifestError(TablesmithError):
    kind = "ManifestError"
    exit_code = 2


class DuplicateId(ManifestError):
    kind = "DuplicateId"


class AlignmentError(TablesmithError):
    kind = "AlignmentError"
    exit_code = 2


class InternalError(TablesmithError):
    """Unexpected failure inside a command; wraps the original exception."""

    kind = "InternalError"
    exit_code = 1
