import importlib
import os
from unittest import TestCase
from unittest.mock import patch

import config.settings
from config.settings import get_log_level


class TestGetLogLevel(TestCase):
    def test_default_value_when_env_not_set(self):
        """Returns the default level (INFO) if the environment variable is not set."""
        with patch.dict(os.environ, {}, clear=True):
            self.assertEqual(get_log_level("NON_EXISTENT_KEY"), "INFO")

    def test_custom_default_value_when_env_not_set(self):
        with patch.dict(os.environ, {}, clear=True):
            self.assertEqual(get_log_level("NON_EXISTENT_KEY", default="DEBUG"), "DEBUG")

    def test_values_are_case_insensitive(self):
        """Returns upper-cased valid levels regardless of input case."""
        test_cases = {"debug": "DEBUG", "Warning": "WARNING", "eRRoR": "ERROR"}
        for input_val, expected_val in test_cases.items():
            with patch.dict(os.environ, {"MY_LEVEL": input_val}):
                self.assertEqual(get_log_level("MY_LEVEL"), expected_val)

    def test_invalid_value_returns_default(self):
        with patch.dict(os.environ, {"MY_LEVEL": "LOUD"}):
            self.assertEqual(get_log_level("MY_LEVEL"), "INFO")


class TestEnvironmentIndependence(TestCase):
    def setUp(self):
        self.addCleanup(importlib.reload, config.settings)

    def test_only_logging_reads_the_environment(self):
        """Stray web-app variables change nothing in the loaded settings."""
        env = {"DJANGO_SECRET": "from-env", "DEBUG": "True", "ALLOWED_HOSTS": "*"}
        with patch.dict(os.environ, env):
            module = importlib.reload(config.settings)
        self.assertEqual(module.SECRET_KEY, "soav-ftn-local-only")
        for name in ("DEBUG", "ALLOWED_HOSTS", "USE_TZ"):
            self.assertFalse(hasattr(module, name), name)
