import logging
from dataclasses import asdict
from typing import Any

from django.conf import settings
from django.core.management.base import CommandParser

from bounds.channel_two import bounds_table
from core.rng import spawn
from experiments.models import Command as RunCommand
from experiments.reports import Report, format_table
from experiments.serializers import SeparationsRowSerializer
from interference.channels import build_channel_two
from optimizer.descent import multi_restart

from ._base import OPTIMIZER_OPTIONS, ExperimentCommand

logger = logging.getLogger(__name__)


class Command(ExperimentCommand):
    help = 'Per-epsilon comparison of classical, quantum and super-quantum rates on Channel II'
    command_name = RunCommand.SEPARATIONS
    option_names = ('epsilons',) + OPTIMIZER_OPTIONS

    def add_experiment_arguments(self, parser: CommandParser) -> None:
        parser.add_argument('--epsilons', default=','.join(str(e) for e in settings.NONLOCAL['EPSILONS']))
        self.add_optimizer_arguments(parser)

    def run_experiment(self, config: dict[str, Any]) -> Report:
        log_base = config['log_base']
        optimizer_config = self.optimizer_config(config)
        epsilons = config['epsilons']

        rows = []
        for bounds, rng in zip(bounds_table(epsilons, log_base), spawn(config['seed'], len(epsilons))):
            result = multi_restart(build_channel_two(bounds.epsilon), optimizer_config, rng, log_base=log_base)
            logger.info(f'epsilon={bounds.epsilon}: optimizer classical maximum {result.best_sum_rate:.6f} {log_base}')
            row = asdict(bounds)
            row.update({
                'optimizer_classical': result.best_sum_rate,
                # Certified by the optimizer's empirical maximum, not by the first-order bound.
                'classical_below_quantum': result.best_sum_rate < bounds.quantum_lower_bound,
                'quantum_below_super_quantum': bounds.quantum_upper_bound < bounds.super_quantum_rate,
                'closed_form_separates': bounds.classical_bound < bounds.quantum_lower_bound,
            })
            rows.append(SeparationsRowSerializer(row).data)

        text = '\n'.join([
            format_table(
                ['epsilon', 'optimizer', 'classical bound', 'quantum lower', 'quantum upper', 'super-quantum',
                 'C < Q', 'Q < SQ', 'bound separates'],
                [[r['epsilon'], r['optimizer_classical'], r['classical_bound'], r['quantum_lower_bound'],
                  r['quantum_upper_bound'], r['super_quantum_rate'], r['classical_below_quantum'],
                  r['quantum_below_super_quantum'], r['closed_form_separates']] for r in rows],
            ),
            f'rates in {log_base}; C < Q is certified by the optimizer maximum against the quantum lower bound',
        ])
        return Report(self.command_name, config, {'rows': rows}, rows, text)
