from typing import Any

from django.core.management.base import CommandParser

from bounds.channel_two import classical_bound_channel_two
from experiments.models import Command as RunCommand
from experiments.reports import Report, format_table
from experiments.serializers import OptResultSerializer
from optimizer.descent import multi_restart

from ._base import OPTIMIZER_OPTIONS, ExperimentCommand

# Optimizer maxima may exceed the first-order classical bound by this much.
BOUND_SLACK = 1e-3


class Command(ExperimentCommand):
    help = 'Maximize I(X1;Y1) + I(X2;Y2) over product input distributions with multi-restart descent'
    command_name = RunCommand.OPTIMIZE
    option_names = ('channel', 'epsilon', 'channel_file') + OPTIMIZER_OPTIONS

    def add_experiment_arguments(self, parser: CommandParser) -> None:
        self.add_channel_arguments(parser)
        self.add_optimizer_arguments(parser)

    def run_experiment(self, config: dict[str, Any]) -> Report:
        spec = self.resolve_channel(config)
        result = multi_restart(spec, self.optimizer_config(config), config['seed'], log_base=config['log_base'])
        data = OptResultSerializer(result).data

        body = {'channel': spec.name, 'epsilon': spec.epsilon, 'result': data}
        if spec.epsilon is not None and spec.erasure:
            bound = classical_bound_channel_two(spec.epsilon, config['log_base'])
            body['classical_bound'] = bound
            body['within_classical_bound'] = result.best_sum_rate <= bound + BOUND_SLACK

        d1, d2 = result.best_distributions
        row = {
            'channel': spec.name,
            'epsilon': spec.epsilon,
            'best_sum_rate': result.best_sum_rate,
            'log_base': result.log_base,
            'restarts': result.restarts,
            'iterations': result.iterations,
            'converged': result.converged,
            **{f'd1_{k}': float(p) for k, p in enumerate(d1)},
            **{f'd2_{k}': float(p) for k, p in enumerate(d2)},
        }

        lines = [
            f'{spec.name}: best sum rate {result.best_sum_rate:.6f} {result.log_base} '
            f'over {result.restarts} restarts ({result.iterations} iterations, '
            f"{'converged' if result.converged else 'not converged'})",
            'best distributions:',
            format_table(['sender'] + [f'p{k}' for k in range(len(d1))], [[1, *d1], [2, *d2]]),
            'restart histogram:',
            format_table(['rate', 'restarts'], sorted((result.histogram or {}).items())),
        ]
        if 'classical_bound' in body:
            lines.append(f"classical bound {body['classical_bound']:.6f}: "
                         f"{'respected' if body['within_classical_bound'] else 'EXCEEDED'}")
        return Report(self.command_name, config, body, [row], '\n'.join(lines))
