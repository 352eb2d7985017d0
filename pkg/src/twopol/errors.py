"""Exception and warning types shared across the package."""


class CutoffTooSmallError(ValueError):
    """The requested truncation drops more probability than allowed.

    Carries the smallest adequate cutoff so callers can retry.
    """

    def __init__(self, message: str, min_cutoff: int):
        super().__init__(message)
        self.min_cutoff = min_cutoff


class NormalizationError(ValueError):
    """Amplitudes or mixture weights violate a normalization contract."""


class DegenerateStateError(ValueError):
    """A state constructor received an all-zero amplitude table."""


class SpecFileError(ValueError):
    """A state-spec file failed to parse; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class TruncationWarning(UserWarning):
    """The result is partial because the operator order exceeds the basis."""
