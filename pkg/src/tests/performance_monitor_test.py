"""Test stage timings and the diagnostics collector."""

import pytest

from src.core.diagnostics import DiagnosticsCollector
from src.core.errors import HKError
from src.utils.helpers.performance_monitor import PerformanceMonitor


def test_measure_counts_calls() -> None:
    """Repeated stages accumulate."""
    # Arrange
    monitor = PerformanceMonitor()

    # Act
    for _ in range(3):
        with monitor.measure("rank"):
            pass

    # Assert
    metrics = monitor.get_metrics()
    assert metrics["rank"]["calls"] == 3
    assert metrics["rank"]["seconds"] >= metrics["rank"]["max_seconds"] >= 0
    assert "custom" not in metrics


def test_measure_records_on_error() -> None:
    """A failing stage is still timed."""
    monitor = PerformanceMonitor()
    with pytest.raises(RuntimeError), monitor.measure("closure"):
        raise RuntimeError("boom")
    assert monitor.get_metrics()["closure"]["calls"] == 1


def test_custom_metrics_accumulate() -> None:
    """Custom values are listed in the order they were added."""
    # Arrange
    monitor = PerformanceMonitor()
    monitor.add_custom_metric("keys", 4)
    monitor.add_custom_metric("keys", 7)

    # Act
    metrics = monitor.get_metrics()

    # Assert
    assert metrics == {"custom": {"keys": [4, 7]}}


def test_diagnostics_collects_warnings() -> None:
    """Warnings accumulate; traps raise."""
    # Arrange
    diagnostics = DiagnosticsCollector()

    # Act
    diagnostics.handle_warning("skipped x0 + x1")
    diagnostics.handle_trap(condition=True, message="unused")

    # Assert
    assert len(diagnostics) == 1
    with pytest.raises(HKError):
        diagnostics.handle_trap(condition=False, message="bad member")
