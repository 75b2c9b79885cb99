import itertools
from typing import Any

from django.core.management.base import CommandParser

from experiments.models import Command as RunCommand
from experiments.reports import Report
from interference.models import Pair
from interference.textformat import dump_channel

from ._base import ExperimentCommand


class Command(ExperimentCommand):
    help = 'Print a channel table in the plain-text channel format'
    command_name = RunCommand.CHANNEL
    option_names = ('channel', 'epsilon', 'channel_file')

    def add_experiment_arguments(self, parser: CommandParser) -> None:
        self.add_channel_arguments(parser)

    def run_experiment(self, config: dict[str, Any]) -> Report:
        spec = self.resolve_channel(config)
        nx1, nx2 = spec.input_alphabet_sizes
        ny1, ny2 = spec.output_alphabet_sizes
        labels_1, labels_2 = spec.output_labels(Pair.FIRST), spec.output_labels(Pair.SECOND)

        rows = [
            {'x1': x1, 'x2': x2, 'y1': labels_1[y1], 'y2': labels_2[y2], 'p': float(spec.pmf[x1, x2, y1, y2])}
            for x1, x2, y1, y2 in itertools.product(range(nx1), range(nx2), range(ny1), range(ny2))
        ]
        body = {
            'channel': {
                'name': spec.name,
                'epsilon': spec.epsilon,
                'erasure': spec.erasure,
                'inputs': [nx1, nx2],
                'outputs': [ny1, ny2],
                'pmf': spec.pmf.tolist(),
            }
        }
        return Report(self.command_name, config, body, rows, dump_channel(spec))
