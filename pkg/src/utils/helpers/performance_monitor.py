"""Performance Monitor Module.

Wall-clock timings of the pipeline stages (oracle rank, mutant closure,
reduced systems). The CLI attaches them to JSON output as ``timings``.
"""

import logging
import time
from collections.abc import Iterator
from contextlib import contextmanager
from typing import Any

logger = logging.getLogger(__name__)


class PerformanceMonitor:
    """Accumulates elapsed time and call counts per named stage."""

    def __init__(self) -> None:
        """Initialize the PerformanceMonitor class."""
        self.metrics: dict[str, dict[str, float]] = {}
        self.custom_metrics: dict[str, list[Any]] = {}

    @contextmanager
    def measure(self, stage: str) -> Iterator[None]:
        """Time the enclosed block under ``stage``.

        The time is recorded even when the block raises.
        """
        start = time.perf_counter()
        try:
            yield
        finally:
            elapsed = time.perf_counter() - start
            entry = self.metrics.setdefault(
                stage, {"seconds": 0.0, "calls": 0, "max_seconds": 0.0}
            )
            entry["seconds"] += elapsed
            entry["calls"] += 1
            entry["max_seconds"] = max(entry["max_seconds"], elapsed)
            logger.info("%s took %.3fs", stage, elapsed)

    def add_custom_metric(self, name: str, value: Any) -> None:
        """Add a custom metric.

        Args:
            name: The name of the metric.
            value: The value of the metric.
        """
        self.custom_metrics.setdefault(name, []).append(value)

    def get_metrics(self) -> dict[str, Any]:
        """Timings per stage, plus custom metrics when any were added."""
        result: dict[str, Any] = {
            stage: dict(entry) for stage, entry in self.metrics.items()
        }
        if self.custom_metrics:
            result["custom"] = {k: list(v) for k, v in self.custom_metrics.items()}
        return result
