from django.apps import AppConfig


class PovmConfig(AppConfig):
    name = 'povm'
    verbose_name = 'POVM machinery'
