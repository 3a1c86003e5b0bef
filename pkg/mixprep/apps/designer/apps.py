from django.apps import AppConfig


class DesignerConfig(AppConfig):
    name = "mixprep.apps.designer"
