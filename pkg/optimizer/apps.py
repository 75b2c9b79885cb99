from django.apps import AppConfig


class OptimizerAppConfig(AppConfig):
    name = 'optimizer'
    verbose_name = 'Sphere-constrained optimizer'
