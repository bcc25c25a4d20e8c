"""Exception types shared across the package."""


class XInflateError(Exception):
    """Base class of every error raised deliberately by this package."""


class ValidationError(XInflateError):
    """An input violates a documented precondition (bad model, point, config)."""


class SchemaError(ValidationError):
    """A serialized document does not match the expected schema.

    Carries the JSON path of the offending element so the message points at
    the exact spot in the document.
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class BudgetExceededError(XInflateError):
    """An exhaustive enumeration ran past its subset budget.

    Partial results computed before the budget ran out are attached so a
    caller can inspect them, flagged as incomplete.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class DualityConstructionError(XInflateError):
    """A constructed dual candidate failed its validity check.

    The offending candidate is attached for inspection; these reports are the
    raw material for judging the pairing construction on models where it is
    not guaranteed to go through.
    """

    def __init__(self, message: str, candidate=None):
        super().__init__(message)
        self.candidate = candidate
