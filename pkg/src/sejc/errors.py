"""Exception hierarchy shared by all compiler phases."""


class SejcError(Exception):
    """Base class; ``phase`` names the pipeline stage that failed."""

    phase = "sejc"
    exit_code = 3

    def __init__(self, message, location=None):
        super().__init__(message)
        self.message = message
        self.location = location

    def __str__(self):
        if self.location:
            return f"{self.location}: {self.message}"
        return self.message


class ReadError(SejcError):
    phase = "read"
    exit_code = 2

    def __init__(self, message, line, column, source=None):
        loc = f"{source or '<input>'}:{line}:{column}"
        super().__init__(message, loc)
        self.line = line
        self.column = column


class FrontendError(SejcError):
    phase = "frontend"
    exit_code = 2


class DirectiveError(SejcError):
    phase = "directive"
    exit_code = 3


class MissingGlbType(DirectiveError):
    phase = "pre-translation"

    def __init__(self, function, types):
        self.function = function
        self.types = tuple(types)
        shown = " ".join(t.keyword for t in self.types)
        super().__init__(
            f"input types of {function} are not closed under greatest lower "
            f"bounds: add a function type with inputs ({shown})"
        )


class TypeAnnotationError(SejcError):
    phase = "pre-translation"


class NameCollisionError(SejcError):
    phase = "proper-translation"


class EvalError(SejcError):
    """Raised by the source interpreter."""

    phase = "interpreter"
    exit_code = 4


class StepLimitExceeded(EvalError):
    pass


class TargetError(SejcError):
    """Raised by the target-code evaluator."""

    phase = "target-evaluator"
    exit_code = 4


class CastError(TargetError):
    pass


class NoApplicableOverload(TargetError):
    pass


class AmbiguousOverload(TargetError):
    pass


class DepthExceeded(TargetError):
    pass
