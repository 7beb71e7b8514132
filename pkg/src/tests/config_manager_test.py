"""Tests for the configuration manager."""

import os
import tempfile
import unittest
from unittest import mock

from src.core.errors import ConfigurationError
from src.managers.config_manager import BUDGET_ENV, ConfigManager


class TestConfigManager(unittest.TestCase):
    """Loading, validation and overrides of hk settings."""

    def setUp(self) -> None:
        """Run without an inherited budget override."""
        patcher = mock.patch.dict(os.environ, {}, clear=False)
        patcher.start()
        self.addCleanup(patcher.stop)
        os.environ.pop(BUDGET_ENV, None)

    def _write_yaml(self, text: str) -> str:
        handle = tempfile.NamedTemporaryFile(
            "w", suffix=".yaml", delete=False, encoding="utf-8"
        )
        with handle:
            handle.write(text)
        self.addCleanup(os.unlink, handle.name)
        return handle.name

    def test_default_config_loads(self) -> None:
        config = ConfigManager()
        self.assertEqual(config.oracle.budget, 1 << 24)
        self.assertEqual(config.mutation.depth, 8)
        self.assertEqual(config.reduced_system.bound, 10)
        self.assertEqual(config.estimator.q_max, 10000)
        self.assertEqual(config.performance.max_workers, 1)

    def test_missing_file(self) -> None:
        with self.assertRaises(ConfigurationError):
            ConfigManager("/nonexistent/hk.yaml")

    def test_missing_sections(self) -> None:
        config = ConfigManager()
        with self.assertRaises(ConfigurationError) as ctx:
            config._validate_config({})
        self.assertIn("oracle", str(ctx.exception))

    def test_section_must_be_mapping(self) -> None:
        config = ConfigManager()
        broken = {section: {} for section in config.REQUIRED_SECTIONS}
        broken["oracle"] = [1, 2]
        with self.assertRaises(ConfigurationError):
            config._validate_config(broken)

    def test_malformed_yaml(self) -> None:
        path = self._write_yaml("oracle: [unclosed\n")
        with self.assertRaises(ConfigurationError):
            ConfigManager(path)

    def test_unknown_key(self) -> None:
        config = ConfigManager()
        with self.assertRaises(ConfigurationError):
            config.update_config("oracle", "budgit", 5)

    def test_out_of_range_value(self) -> None:
        config = ConfigManager()
        with self.assertRaises(ConfigurationError):
            config.update_config("estimator", "rho_clamp", 1.0)
        self.assertEqual(config.estimator.rho_clamp, 0.9)

    def test_rejected_update_is_rolled_back(self) -> None:
        config = ConfigManager()
        with self.assertRaises(ConfigurationError):
            config.update_config("performance", "max_workers", 0)
        with self.assertRaises(ConfigurationError):
            config.update_config("oracle", "budgit", 5)
        self.assertEqual(config.performance.max_workers, 1)
        self.assertNotIn("budgit", config.get_full_config()["oracle"])
        config.update_config("mutation", "stability_delta", 3)
        self.assertEqual(config.mutation.stability_delta, 3)

    def test_budget_environment_override(self) -> None:
        with mock.patch.dict(os.environ, {BUDGET_ENV: "4096"}):
            config = ConfigManager()
        self.assertEqual(config.oracle.budget, 4096)

    def test_bad_budget_environment(self) -> None:
        for raw in ("lots", "0"):
            with self.subTest(raw=raw), mock.patch.dict(os.environ, {BUDGET_ENV: raw}):
                with self.assertRaises(ConfigurationError):
                    ConfigManager()

    def test_update_config(self) -> None:
        config = ConfigManager()
        config.update_config("mutation", "depth", 3)
        self.assertEqual(config.mutation.depth, 3)
        self.assertEqual(config.get_section("mutation")["depth"], 3)

    def test_full_config_has_every_section(self) -> None:
        full = ConfigManager().get_full_config()
        self.assertEqual(tuple(full), ConfigManager.REQUIRED_SECTIONS)
        with self.assertRaises(ConfigurationError):
            ConfigManager().get_section("display")


if __name__ == "__main__":
    unittest.main()
