from dataclasses import asdict
from typing import Any

from django.conf import settings
from django.core.management.base import CommandParser

from bounds.channel_two import (
    bounds_table,
    classical_bound_channel_two,
    classical_bound_numeric,
    quantum_bound_channel_two,
    quantum_bound_numeric,
)
from core.exceptions import InvariantViolation
from experiments.models import Command as RunCommand
from experiments.reports import Report, format_table
from experiments.serializers import BoundsRowSerializer

from ._base import ExperimentCommand

# Numeric oracles must reproduce the closed forms this closely.
ORACLE_TOL = 1e-6


class Command(ExperimentCommand):
    help = 'Channel II capacity bounds: classical, quantum lower/upper and super-quantum, per epsilon'
    command_name = RunCommand.BOUNDS
    option_names = ('epsilons', 'verify')

    def add_experiment_arguments(self, parser: CommandParser) -> None:
        parser.add_argument('--epsilons', default=','.join(str(e) for e in settings.NONLOCAL['EPSILONS']))
        parser.add_argument('--verify', action='store_true',
                            help='Check the closed forms against constrained numeric maximization')

    def run_experiment(self, config: dict[str, Any]) -> Report:
        log_base = config['log_base']
        rows = bounds_table(config['epsilons'], log_base)
        data = [BoundsRowSerializer(row).data for row in rows]
        body = {'rows': data}

        lines = [
            format_table(
                ['epsilon', 'classical', 'classical bits', 'classical nats', 'quantum lower', 'quantum upper', 'super-quantum'],
                [[r.epsilon, r.classical_bound, r.classical_bound_bits, r.classical_bound_nats,
                  r.quantum_lower_bound, r.quantum_upper_bound, r.super_quantum_rate] for r in rows],
            ),
            f'rates in {log_base}',
        ]
        if any(r.classical_bound > r.quantum_lower_bound for r in rows):
            lines.append('note: the first-order classical bound exceeds the quantum lower bound in both bases; '
                         'it does not by itself separate classical from quantum')

        if config.get('verify'):
            classical, _ = classical_bound_numeric(log_base, rng=config['seed'])
            quantum, _ = quantum_bound_numeric(log_base, rng=config['seed'])
            checks = {
                'classical_numeric': classical,
                'classical_closed_form': classical_bound_channel_two(1.0, log_base),
                'quantum_numeric': quantum,
                'quantum_closed_form': quantum_bound_channel_two(1.0, log_base),
            }
            body['verification'] = checks
            lines.append(f"numeric check at epsilon=1: classical {classical:.9f}, quantum {quantum:.9f}")
            if (abs(classical - checks['classical_closed_form']) > ORACLE_TOL
                    or abs(quantum - checks['quantum_closed_form']) > ORACLE_TOL):
                raise InvariantViolation('Numeric maximization disagrees with the closed-form bounds')

        return Report(self.command_name, config, body, [asdict(row) for row in rows], '\n'.join(lines))
