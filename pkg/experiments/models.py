"""
Vocabularies of the command-line surface.
"""
from django.db import models


class Command(models.TextChoices):
    SIMULATE = 'simulate', 'Monte Carlo coding experiment'
    OPTIMIZE = 'optimize', 'Multi-restart sum-rate optimizer'
    BOUNDS = 'bounds', 'Capacity bounds table'
    CHSH = 'chsh', 'CHSH values of the correlation boxes'
    POVM_CHECK = 'povm-check', 'POVM property suite'
    SEPARATIONS = 'separations', 'Classical / quantum / super-quantum separations'
    CHANNEL = 'channel', 'Print a channel table'


class ChannelName(models.TextChoices):
    ONE = 'one', 'Channel I'
    TWO = 'two', 'Channel II'


class OutputFormat(models.TextChoices):
    HUMAN = 'human', 'Aligned text tables'
    JSON = 'json', 'JSON document'
    CSV = 'csv', 'CSV rows'


# Commands that act on a single channel.
CHANNEL_COMMANDS = {Command.SIMULATE, Command.OPTIMIZE, Command.CHANNEL}
