"""Exception types shared across the pipeline."""


class MGCFError(Exception):
    """Base class for all errors raised by this package."""


class DataFormatError(MGCFError, ValueError):
    """Malformed input data (ragged rows, bad labels, invariant violations)."""


class ParseError(DataFormatError):
    """A token could not be parsed as a number."""


class UnsupportedCardinalityError(DataFormatError):
    """The dataset does not have exactly two classes."""


class DimensionError(MGCFError, ValueError):
    """Two sequences that must agree in length do not."""


class EmptyInputError(MGCFError, ValueError):
    pass


class InvariantViolation(MGCFError, RuntimeError):
    """An internal consistency check failed. Indicates a bug."""


class StageError(MGCFError):
    """Wraps an error raised inside one pipeline stage."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {cause}")
