"""Exception types shared across the engine."""


class FeatureError(ValueError):
    """Base class for feature-file problems."""


class ParseError(FeatureError):
    """Input bytes are not structurally valid (bad JSON/CSV, NaN, empty file)."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SchemaError(FeatureError):
    """Well-formed input that violates the feature schema."""


class RangeError(SchemaError):
    """A numeric field is outside its allowed interval."""


class OrderingError(SchemaError):
    """Frame indices are not strictly increasing."""


class CalibrationError(ValueError):
    """Base class for calibration problems."""


class DegenerateCalibrationError(CalibrationError):
    """All raw scores identical: min == max leaves the affine map undefined."""


class IncompleteCalibrationError(CalibrationError):
    """A calibration file is missing one of the required metric records."""


class CorrelationError(ValueError):
    """Rank correlation is undefined for the given inputs."""


class SequenceTooShortError(ValueError):
    """A motion track has too few frames for the requested statistic."""
