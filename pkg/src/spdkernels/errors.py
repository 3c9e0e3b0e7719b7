"""Exception types shared across the package."""


class SpecFileError(ValueError):
    """A kernel-spec file failed validation; carries the offending field path."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class NotApplicableError(RuntimeError):
    """An operation's precondition does not hold for the given input."""


class SamplingError(RuntimeError):
    """Rejection sampling failed to produce an admissible configuration."""


class NumericalError(RuntimeError):
    """A numerical routine failed (non-convergence, non-finite output)."""
