"""Exception hierarchy.

Every exception carries a stable ``code`` used by the CLI error objects.
"""


class GelspecError(Exception):
    code = "GelspecError"
    exit_status = 2

    def to_json(self) -> dict:
        return {"error": {"code": self.code, "message": str(self)}}


class ValidationError(GelspecError):
    code = "ValidationError"


class CapExceeded(GelspecError):
    code = "CapExceeded"
    exit_status = 3


class NotSelfAdjoint(ValidationError):
    code = "NotSelfAdjoint"


class NotProjection(ValidationError):
    code = "NotProjection"


class NotOrthogonal(ValidationError):
    code = "NotOrthogonal"


class DimMismatch(ValidationError):
    code = "DimMismatch"


class NotInContext(ValidationError):
    code = "NotInContext"


class NotComparable(ValidationError):
    code = "NotComparable"


class NotOpen(ValidationError):
    code = "NotOpen"


class NotMonotone(ValidationError):
    code = "NotMonotone"


class NotUpset(ValidationError):
    code = "NotUpset"


class ContextMissing(ValidationError):
    code = "ContextMissing"


class NoMatchingCharacter(ValidationError):
    code = "NoMatchingCharacter"


class UnderdeterminedAssignment(ValidationError):
    code = "UnderdeterminedAssignment"


class ParseError(ValidationError):
    code = "ParseError"


class SchemaError(ValidationError):
    code = "SchemaError"


class NoConvergence(GelspecError):
    code = "NoConvergence"


class FrameTooLarge(CapExceeded):
    code = "FrameTooLarge"


class TooLarge(CapExceeded):
    code = "TooLarge"
