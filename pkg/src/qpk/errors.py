"""Exception types shared across the package."""


class QpkError(Exception):
    """Base class for all package errors."""


class DomainError(QpkError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ValidationError(QpkError, ValueError):
    """A system configuration violates one or more model assumptions.

    Carries the complete list of failed conditions, not just the first.
    """

    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__("; ".join(self.failures))


# Solvers report configuration problems under this name.
ConfigError = ValidationError


class PreconditionError(QpkError, ValueError):
    """An operation was called outside its stated applicability conditions."""


class DegenerateError(QpkError, ValueError):
    """The measurement or step carries no usable information."""


class NoRootError(QpkError, ArithmeticError):
    """A root search found no sign change in its bracket."""


class StabilityError(QpkError, ValueError):
    """A simulated queue would be unstable at the requested operating point."""


class InsufficientDataError(QpkError, ValueError):
    """An empirical measurement window contained too few samples."""
