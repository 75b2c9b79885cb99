import math
from typing import Any

from django.conf import settings
from django.core.management.base import CommandParser

from boxes.correlations import (
    TSIRELSON_WIN,
    best_deterministic_win,
    box_table,
    chsh_value,
    chsh_win_probability,
    deterministic_box,
    estimate_win_probability,
    is_nonsignaling,
    pr_box,
    tsirelson_box,
    uniform_box,
)
from core.exceptions import InvariantViolation
from core.rng import spawn
from experiments.models import Command as RunCommand
from experiments.reports import Report, format_table
from experiments.serializers import ChshRowSerializer

from ._base import ExperimentCommand

CLASSICAL_WIN = 0.75
EXACT_TOL = 1e-12


class Command(ExperimentCommand):
    help = 'CHSH win probabilities and values of the PR, Tsirelson, uniform and best classical boxes'
    command_name = RunCommand.CHSH
    option_names = ('samples',)

    def add_experiment_arguments(self, parser: CommandParser) -> None:
        parser.add_argument('--samples', type=int, default=settings.NONLOCAL['TRIALS'],
                            help='Monte Carlo games per box')

    def run_experiment(self, config: dict[str, Any]) -> Report:
        best_win, best_strategy = best_deterministic_win()
        boxes = [pr_box(), tsirelson_box(), uniform_box(), deterministic_box(best_strategy)]
        if abs(best_win - CLASSICAL_WIN) > EXACT_TOL:
            raise InvariantViolation(f'Best deterministic win {best_win} differs from 3/4')

        rows = []
        for box, rng in zip(boxes, spawn(config['seed'], len(boxes))):
            rows.append({
                'box': box.label,
                'win_probability': chsh_win_probability(box),
                'chsh_value': chsh_value(box),
                'nonsignaling': is_nonsignaling(box),
                'sampled_win': estimate_win_probability(box, config['samples'], rng),
            })

        if abs(rows[1]['win_probability'] - TSIRELSON_WIN) > EXACT_TOL:
            raise InvariantViolation('Tsirelson box does not reach cos^2(pi/8)')
        if abs(rows[1]['chsh_value'] - 2 * math.sqrt(2)) > 1e-9:
            raise InvariantViolation('Tsirelson box CHSH value differs from 2 sqrt(2)')

        data = [ChshRowSerializer(row).data for row in rows]
        text = '\n\n'.join([
            format_table(
                ['box', 'win', 'S', 'non-signaling', 'sampled win'],
                [[r['box'], r['win_probability'], r['chsh_value'], r['nonsignaling'], r['sampled_win']] for r in rows],
            ),
            *(box_table(box) for box in boxes),
        ])
        return Report(self.command_name, config, {'boxes': data}, data, text)
