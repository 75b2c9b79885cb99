from typing import Any

from django.core.management.base import CommandParser

from experiments.models import Command as RunCommand
from experiments.reports import Report, format_table
from experiments.serializers import SuiteCheckSerializer
from povm.suite import run_povm_suite

from ._base import ExperimentCommand


class Command(ExperimentCommand):
    help = 'Randomized POVM property suite; exits with status 2 if any check fails'
    command_name = RunCommand.POVM_CHECK
    option_names = ('instances',)

    def add_experiment_arguments(self, parser: CommandParser) -> None:
        parser.add_argument('--instances', type=int, default=10000)

    def run_experiment(self, config: dict[str, Any]) -> Report:
        checks = run_povm_suite(config['instances'], config['seed'])
        data = [SuiteCheckSerializer(check).data for check in checks]
        failed = [check.name for check in checks if not check.passed]

        text = format_table(
            ['check', 'instances', 'passed', 'failed', 'worst'],
            [[c.name, c.instances, c.instances - c.failures, c.failures, c.worst] for c in checks],
        )
        violation = f"POVM checks failed: {', '.join(failed)}" if failed else None
        return Report(self.command_name, config, {'checks': data}, data, text, violation)
