"""Error classes for the Hilbert-Kunz toolkit."""


class HKError(Exception):
    """Base error for every failure raised by the toolkit."""

    def __init__(self, message: str) -> None:
        """Initialize error with message.

        Args:
            message: Error message
        """
        super().__init__(message)
        self.message = message


class PolynomialParseError(HKError):
    """Polynomial text could not be turned into a valid trinomial."""


class InvalidFieldError(HKError):
    """The requested characteristic is not a prime."""


class DimensionMismatchError(HKError):
    """Two objects live in polynomial rings with different variable counts."""


class SeriesError(HKError):
    """An HK series or an estimate is unusable for the requested operation."""


class ConfigurationError(HKError):
    """Base class for configuration-related errors."""


class BudgetExceededError(HKError):
    """The Frobenius box is larger than the configured basis budget."""

    def __init__(self, required: int, budget: int) -> None:
        """Initialize error with the offending sizes.

        Args:
            required: Number of basis monomials the run needs (q^m).
            budget: Largest number of basis monomials allowed.
        """
        super().__init__(
            f"box needs {required} basis monomials but the budget is {budget}; "
            "raise --budget or HK_BUDGET to run it"
        )
        self.required = required
        self.budget = budget
