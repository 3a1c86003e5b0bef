from django.apps import AppConfig


class TomographyConfig(AppConfig):
    name = "mixprep.apps.tomography"
