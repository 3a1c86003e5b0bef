from django.apps import AppConfig


class CircuitsConfig(AppConfig):
    name = "mixprep.apps.circuits"
