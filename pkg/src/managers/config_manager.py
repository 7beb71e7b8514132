"""Configuration manager for the hk toolkit.

Loads ``src/config.yaml`` (or a file given with ``--config``), checks the
required sections and exposes them as typed dataclasses. The
``HK_BUDGET`` environment variable overrides ``oracle.budget``.
"""

import logging
import os
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any

import yaml

from src.core.errors import ConfigurationError

logger = logging.getLogger(__name__)

BUDGET_ENV = "HK_BUDGET"


@dataclass
class OracleConfig:
    """Resource limits of the brute-force oracle."""

    budget: int = 1 << 24
    dense_bit_limit: int = 1 << 26


@dataclass
class MutationConfig:
    """Mutant closure depth and its stability step."""

    depth: int = 8
    stability_delta: int = 2


@dataclass
class ReducedSystemConfig:
    """Truncation of the reduced system and its stability step."""

    bound: int = 10
    stability_delta: int = 2


@dataclass
class EstimatorConfig:
    """Multiplicity estimator and rationality probe settings."""

    q_max: int = 10_000
    rho_clamp: float = 0.9
    min_points: int = 3


@dataclass
class LoggingConfig:
    level: str = "WARNING"
    format: str = "%(asctime)s %(levelname)s %(name)s: %(message)s"


@dataclass
class PerformanceConfig:
    max_workers: int = 1
    chunk_size: int = 64
    show_progress: bool = False


class ConfigManager:
    """Manages configuration loading and access for the hk toolkit."""

    REQUIRED_SECTIONS = (
        "oracle",
        "mutation",
        "reduced_system",
        "estimator",
        "logging",
        "performance",
    )

    def __init__(self, config_path: str | None = None) -> None:
        """Load and validate the configuration.

        Args:
            config_path: YAML file to read. Defaults to ``src/config.yaml``.

        Raises:
            ConfigurationError: If the file is missing, malformed or lacks a
                required section.
        """
        self._config: dict[str, Any] = {}
        self._config_path = config_path or self._get_default_config_path()
        self.load_config()

    def _get_default_config_path(self) -> str:
        """Get the default configuration file path."""
        return str(Path(__file__).parent.parent / "config.yaml")

    def load_config(self) -> None:
        """Load configuration from YAML file with validation."""
        try:
            if not os.path.exists(self._config_path):
                raise ConfigurationError(
                    f"Configuration file not found: {self._config_path}"
                )

            with open(self._config_path, encoding="utf-8") as f:
                loaded = yaml.safe_load(f)
            if not isinstance(loaded, dict):
                raise ConfigurationError(
                    f"Configuration file {self._config_path} is not a mapping"
                )
            self._config = loaded

            self._validate_config(self._config)
            self._initialize_config_objects()
            self._apply_environment()

        except ConfigurationError:
            raise
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Error parsing configuration file: {e}") from e
        except OSError as e:
            raise ConfigurationError(f"Error reading configuration file: {e}") from e

    def _validate_config(self, config: dict[str, Any]) -> None:
        """Validate the configuration dictionary.

        Args:
            config: The configuration dictionary to validate.

        Raises:
            ConfigurationError: If required sections are missing or a section
                is not a mapping.
        """
        if missing_sections := [
            section for section in self.REQUIRED_SECTIONS if section not in config
        ]:
            raise ConfigurationError(
                "Missing required configuration sections: "
                f"{', '.join(missing_sections)}"
            )
        for section in self.REQUIRED_SECTIONS:
            if not isinstance(config[section], dict):
                raise ConfigurationError(f"Section {section} must be a mapping")

    def _initialize_config_objects(self) -> None:
        """Initialize configuration dataclass objects."""
        try:
            self.oracle = OracleConfig(**self._config["oracle"])
            self.mutation = MutationConfig(**self._config["mutation"])
            self.reduced_system = ReducedSystemConfig(**self._config["reduced_system"])
            self.estimator = EstimatorConfig(**self._config["estimator"])
            self.logging = LoggingConfig(**self._config["logging"])
            self.performance = PerformanceConfig(**self._config["performance"])
        except TypeError as e:
            raise ConfigurationError(f"Invalid configuration structure: {e}") from e

        if self.oracle.budget < 1:
            raise ConfigurationError("oracle.budget must be positive")
        if self.mutation.depth < 1:
            raise ConfigurationError("mutation.depth must be at least 1")
        if self.reduced_system.bound < 1:
            raise ConfigurationError("reduced_system.bound must be at least 1")
        if not 0 <= self.estimator.rho_clamp < 1:
            raise ConfigurationError("estimator.rho_clamp must lie in [0, 1)")
        if self.mutation.stability_delta < 1 or self.reduced_system.stability_delta < 1:
            raise ConfigurationError("stability_delta must be at least 1")
        if self.estimator.q_max < 1:
            raise ConfigurationError("estimator.q_max must be positive")
        if self.performance.max_workers < 1:
            raise ConfigurationError("performance.max_workers must be at least 1")

    def _apply_environment(self) -> None:
        """Let HK_BUDGET override the oracle budget."""
        raw = os.environ.get(BUDGET_ENV)
        if raw is None:
            return
        try:
            budget = int(raw)
        except ValueError as e:
            raise ConfigurationError(f"{BUDGET_ENV}={raw!r} is not an integer") from e
        if budget < 1:
            raise ConfigurationError(f"{BUDGET_ENV} must be positive, got {budget}")
        logger.debug("budget %d taken from %s", budget, BUDGET_ENV)
        self.oracle.budget = budget

    def update_config(self, section: str, key: str, value: Any) -> None:
        """Update configuration value at runtime.

        The value is validated like a loaded one; on failure the previous
        value is restored before the error propagates.

        Raises:
            ConfigurationError: On an unknown section or key, or an out of
                range value.
        """
        if section not in self._config:
            raise ConfigurationError(f"Invalid configuration section: {section}")
        values = self._config[section]
        missing = object()
        previous = values.get(key, missing)
        values[key] = value
        try:
            self._initialize_config_objects()
        except ConfigurationError:
            if previous is missing:
                del values[key]
            else:
                values[key] = previous
            self._initialize_config_objects()
            raise
        self._apply_environment()

    def get_section(self, section: str) -> dict[str, Any]:
        """Current values of one section, including overrides."""
        if section not in self.REQUIRED_SECTIONS:
            raise ConfigurationError(f"Invalid configuration section: {section}")
        return asdict(getattr(self, section))

    def get_full_config(self) -> dict[str, Any]:
        """Get complete configuration dictionary."""
        return {
            section: self.get_section(section) for section in self.REQUIRED_SECTIONS
        }
