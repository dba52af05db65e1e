"""Error taxonomy shared across the package.

Domain/precondition violations and accuracy/resource failures are kept
distinct because the CLI maps them to different exit codes (2 and 3).
"""


class DomainError(ValueError):
    """A precondition on the inputs is violated."""


class RangeError(DomainError):
    """An index or parameter falls outside the tabulated/configured range."""


class AccuracyError(RuntimeError):
    """A certified tolerance could not be met within the evaluation budget."""

    def __init__(self, message, best=None, estimate=None):
        super().__init__(message)
        self.best = best
        self.estimate = estimate


class ResourceError(RuntimeError):
    """An evaluation would exceed the configured work budget."""
