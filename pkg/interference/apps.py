from django.apps import AppConfig


class InterferenceConfig(AppConfig):
    name = 'interference'
    verbose_name = 'Interference channels'
