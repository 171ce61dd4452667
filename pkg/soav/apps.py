from django.apps import AppConfig


class SoavAppConfig(AppConfig):
    name = "soav"
    verbose_name = "SOAV detector"
