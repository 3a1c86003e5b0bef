from django.apps import AppConfig


class StatesConfig(AppConfig):
    name = "mixprep.apps.states"
