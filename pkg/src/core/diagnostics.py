"""Diagnostics collector for non-fatal run problems."""

import logging

from src.core.errors import HKError

logger = logging.getLogger(__name__)


class DiagnosticsCollector:
    """Collects warnings raised while a run keeps going."""

    def __init__(self) -> None:
        """Initializes an empty list of warnings."""
        self.warnings: list[str] = []

    def handle_warning(self, message: str) -> None:
        """Record a non-critical failure and log it."""
        logger.warning("%s", message)
        self.warnings.append(message)

    def handle_fatal(self, message: str) -> None:
        """Handle a critical failure.

        Raises an HKError with the given message.
        """
        raise HKError(message)

    def handle_trap(self, *, condition: bool, message: str) -> None:
        """Raise when a required condition does not hold.

        Args:
            condition (bool): The condition to check.
            message (str): The error message if the condition is False.
        """
        if not condition:
            self.handle_fatal(message)

    def __len__(self) -> int:
        """Number of recorded warnings."""
        return len(self.warnings)
