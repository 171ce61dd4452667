from django.apps import apps
from django.test import SimpleTestCase

from core.apps import CoreConfig


class AppConfigTests(SimpleTestCase):
    def test_apps_config(self):
        self.assertEqual(CoreConfig.name, "core")

    def test_simulation_apps_are_installed(self):
        for label in ("core", "channel", "soav", "baselines", "harness", "cli"):
            with self.subTest(label=label):
                self.assertTrue(apps.is_installed(label))
