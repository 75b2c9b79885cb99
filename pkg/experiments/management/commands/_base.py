"""
Shared plumbing for the experiment commands: common flags, config
validation, audit logging, output and exit codes.
"""
import logging
from pathlib import Path
from typing import Any

from django.conf import settings
from django.core.management.base import BaseCommand, CommandParser

from audit.recorder import audit_run
from core.exceptions import ConfigurationError, InvariantViolation
from experiments.models import ChannelName, OutputFormat
from experiments.reports import Report, render_report
from experiments.serializers import RunConfigSerializer
from interference.channels import channel_by_name
from interference.models import ChannelSpec, LogBase
from interference.textformat import load_channel
from optimizer.models import OptimizerConfig, StepWeights

logger = logging.getLogger(__name__)

# Flags every experiment command accepts, mapped to RunConfig fields.
COMMON_OPTIONS = ('seed', 'log_base', 'output', 'out_path')
OPTIMIZER_OPTIONS = ('restarts', 'tol', 'maxiter', 'line_search_grid', 'refine_iters', 'step_weights')


def _format_errors(errors: Any) -> str:
    if isinstance(errors, dict):
        return '; '.join(f'{key}: {_format_errors(value)}' for key, value in errors.items())
    if isinstance(errors, list):
        return ' '.join(_format_errors(item) for item in errors)
    return str(errors)


class ExperimentCommand(BaseCommand):
    """
    Base class for commands that run one experiment and emit a report.

    Subclasses set `command_name` and `option_names`, add their flags in
    `add_experiment_arguments` and build the report in `run_experiment`.
    """
    requires_system_checks: list[str] = []
    command_name = ''
    option_names: tuple[str, ...] = ()

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument('--seed', type=int, default=None,
                            help='Seed for every random source (required for json/csv output)')
        parser.add_argument('--log-base', dest='log_base', choices=LogBase.values,
                            default=settings.NONLOCAL['LOG_BASE'])
        parser.add_argument('--output', choices=OutputFormat.values, default=OutputFormat.HUMAN)
        parser.add_argument('--out', dest='out_path', default=None, help='Write the report to this file')
        self.add_experiment_arguments(parser)

    def add_experiment_arguments(self, parser: CommandParser) -> None:
        pass

    def add_channel_arguments(self, parser: CommandParser) -> None:
        parser.add_argument('--channel', choices=ChannelName.values, default=None)
        parser.add_argument('--epsilon', type=float, default=None)
        parser.add_argument('--channel-file', dest='channel_file', default=None,
                            help='Channel table in the plain-text channel format')

    def add_optimizer_arguments(self, parser: CommandParser) -> None:
        defaults = settings.OPTIMIZER
        parser.add_argument('--restarts', type=int, default=settings.NONLOCAL['RESTARTS'])
        parser.add_argument('--tol', type=float, default=defaults['TOL'])
        parser.add_argument('--maxiter', type=int, default=defaults['MAXITER'])
        parser.add_argument('--line-search-grid', dest='line_search_grid', type=int,
                            default=defaults['LINE_SEARCH_GRID'])
        parser.add_argument('--refine-iters', dest='refine_iters', type=int, default=defaults['REFINE_ITERS'])
        parser.add_argument('--step-weights', dest='step_weights', choices=StepWeights.values,
                            default=StepWeights.GRADIENT)

    def optimizer_config(self, config: dict[str, Any]) -> OptimizerConfig:
        return OptimizerConfig(**{name: config[name] for name in OPTIMIZER_OPTIONS})

    def validate_config(self, options: dict[str, Any]) -> dict[str, Any]:
        data = {'command': self.command_name}
        data.update({name: options.get(name) for name in COMMON_OPTIONS + self.option_names})
        serializer = RunConfigSerializer(data=data, context={'default_seed': settings.NONLOCAL['SEED']})
        if not serializer.is_valid():
            raise ConfigurationError(f'Invalid configuration: {_format_errors(serializer.errors)}')
        return dict(serializer.validated_data)

    def resolve_channel(self, config: dict[str, Any]) -> ChannelSpec:
        path = config.get('channel_file')
        if path:
            try:
                text = Path(path).read_text()
            except OSError as exc:
                raise ConfigurationError(f'Cannot read channel file {path}: {exc}') from exc
            return load_channel(text)
        return channel_by_name(config['channel'], config.get('epsilon'))

    def run_experiment(self, config: dict[str, Any]) -> Report:
        raise NotImplementedError

    def handle(self, *args: Any, **options: Any) -> None:
        with audit_run(self.command_name, options.get('seed'), {k: options.get(k) for k in self.option_names}) as record:
            config = self.validate_config(options)
            record.seed = config.get('seed')
            logger.info(f"{self.command_name}: seed={config.get('seed')}")
            report = self.run_experiment(config)
            text = render_report(report, config.get('output', OutputFormat.HUMAN))
            out_path = config.get('out_path')
            if out_path:
                Path(out_path).write_text(text)
                logger.info(f'Report written to {out_path}')
            else:
                self.stdout.write(text, ending='')
            if report.violation:
                raise InvariantViolation(report.violation)
