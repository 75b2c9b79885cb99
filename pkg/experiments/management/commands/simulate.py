import csv
import logging
from pathlib import Path
from typing import Any

from django.conf import settings
from django.core.management.base import CommandParser

from coding.models import Decoder, MessageSource, RateModel, Resource
from coding.trials import (
    TRANSCRIPT_HEADER,
    assert_error_free,
    empirical_rate,
    resolve_rate_model,
    run_sharded,
    strategy_for_resource,
)
from experiments.models import Command as RunCommand
from experiments.reports import Report, format_table
from experiments.serializers import RateReportSerializer, TrialStatsSerializer

from ._base import ExperimentCommand

logger = logging.getLogger(__name__)


class Command(ExperimentCommand):
    help = 'Monte Carlo coding experiment: encode, transmit, decode and estimate rates'
    command_name = RunCommand.SIMULATE
    option_names = (
        'channel', 'epsilon', 'channel_file', 'resource', 'trials', 'shards',
        'model', 'messages', 'decoder', 'transcript',
    )

    def add_experiment_arguments(self, parser: CommandParser) -> None:
        self.add_channel_arguments(parser)
        parser.add_argument('--resource', choices=Resource.values, default=Resource.PR)
        parser.add_argument('--trials', type=int, default=settings.NONLOCAL['TRIALS'])
        parser.add_argument('--shards', type=int, default=1,
                            help='Split trials over independent seeded substreams')
        parser.add_argument('--model', choices=RateModel.values, default=RateModel.AUTO)
        parser.add_argument('--messages', choices=MessageSource.values, default=MessageSource.UNIFORM)
        parser.add_argument('--decoder', choices=Decoder.values, default=Decoder.ERASURE_AWARE)
        parser.add_argument('--transcript', default=None, help='Write per-trial CSV rows to this file')

    def run_experiment(self, config: dict[str, Any]) -> Report:
        spec = self.resolve_channel(config)
        strategy = strategy_for_resource(config['resource'], config['decoder'])
        stats = run_sharded(
            spec, strategy, config['messages'], config['trials'], config['seed'], config['shards'],
            transcript=bool(config.get('transcript')),
        )
        if config.get('transcript'):
            with Path(config['transcript']).open('w', newline='') as handle:
                writer = csv.writer(handle, lineterminator='\n')
                writer.writerow(TRANSCRIPT_HEADER)
                writer.writerows(stats.transcript or [])
            logger.info(f"Transcript of {stats.n} trials written to {config['transcript']}")

        assert_error_free(stats, spec, strategy)
        model = resolve_rate_model(spec, strategy, config['model'])
        rate = empirical_rate(stats, model, config['log_base'])

        stats_data = TrialStatsSerializer(stats).data
        rate_data = RateReportSerializer(rate).data
        body = {
            'channel': spec.name,
            'epsilon': spec.epsilon,
            'resource': config['resource'],
            'rate_model': model,
            'stats': stats_data,
            'rate': rate_data,
        }
        row = {'channel': spec.name, 'epsilon': spec.epsilon, 'resource': config['resource'], 'rate_model': model}
        row.update(stats_data)
        row.update(rate_data)

        text = '\n'.join([
            f"{spec.name} (epsilon={spec.epsilon if spec.epsilon is not None else '-'}), "
            f"resource={config['resource']}, {stats.n} trials, rate model {model}",
            format_table(
                ['pair', 'errors', 'error frac', 'erasures', 'erasure frac', f"rate ({config['log_base']})"],
                [
                    [1, stats.errors_1, stats.error_fraction(1), stats.erasures_1, stats.erasure_fraction(1), rate.r1],
                    [2, stats.errors_2, stats.error_fraction(2), stats.erasures_2, stats.erasure_fraction(2), rate.r2],
                ],
            ),
            f'sum rate: {rate.sum_rate:.6f} {rate.log_base}'
            + (f' (+/- {rate.sum_stderr:.6f} s.e.)' if rate.sum_stderr is not None else ''),
        ])
        return Report(self.command_name, config, body, [row], text)
