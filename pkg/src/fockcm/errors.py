"""Exception hierarchy shared by all modules."""


class FockCMError(Exception):
    """Base class for every error raised by the package."""


class NumericalFault(FockCMError):
    """Raised when a simulation step cannot be carried out reliably."""


class TruncationTooSmall(NumericalFault):
    """Probability mass reached the top of the truncated Fock window."""


class NullOutcome(NumericalFault):
    """A post-selected measurement outcome has (near) zero probability."""

    def __init__(self, probability: float, message: str | None = None):
        self.probability = probability
        super().__init__(message or f"measurement outcome probability {probability:.3e} below threshold")


class InvalidModel(FockCMError, ValueError):
    """A timing model violates its invariants."""


class InvalidConfig(FockCMError, ValueError):
    """An experiment configuration is inconsistent."""


class ParseError(FockCMError, ValueError):
    """Malformed configuration text."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class ValidationError(InvalidConfig):
    """Configuration text parsed but a field value violates an invariant."""
