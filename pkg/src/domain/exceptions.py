class GiniError(Exception):
    """Base class for every error raised by the toolkit."""


class GiniDomainError(GiniError, ValueError):
    """An input violates a precondition of the requested operation."""


class AssumptionViolatedError(GiniDomainError):
    """A distribution does not satisfy the regularity needed by an operation."""


class GroupedDataError(GiniDomainError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConvergenceError(GiniError, ArithmeticError):
    """An iterative numerical routine did not reach its tolerance."""


class IntegrationError(ConvergenceError):
    pass


class ConfigurationError(GiniDomainError):
    """A ``GININ_*`` environment variable does not parse."""
