"""Lets pytest collect the Django test modules with the same settings as test.sh."""

import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.test_settings")
django.setup()
