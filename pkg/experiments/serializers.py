"""
Serializers for run configuration and experiment reports.
"""
from typing import Any, Optional

from rest_framework import serializers

from coding.models import Decoder, MessageSource, RateModel, Resource, TrialStats
from interference.models import LogBase
from optimizer.models import OptResult, StepWeights

from .models import CHANNEL_COMMANDS, ChannelName, Command, OutputFormat

MAX_SEED = 2**64 - 1


class RunConfigSerializer(serializers.Serializer):
    """
    Validate the flags of one command run.

    Only the flags a command defines are passed in, so `validated_data`
    doubles as the config recorded in the report provenance.
    """
    command = serializers.ChoiceField(choices=Command.choices)
    seed = serializers.IntegerField(min_value=0, max_value=MAX_SEED, required=False, allow_null=True)
    log_base = serializers.ChoiceField(choices=LogBase.choices, required=False)
    output = serializers.ChoiceField(choices=OutputFormat.choices, required=False)
    out_path = serializers.CharField(required=False, allow_null=True)

    channel = serializers.ChoiceField(choices=ChannelName.choices, required=False, allow_null=True)
    channel_file = serializers.CharField(required=False, allow_null=True)
    epsilon = serializers.FloatField(min_value=0.0, max_value=1.0, required=False, allow_null=True)
    epsilons = serializers.CharField(required=False)

    resource = serializers.ChoiceField(choices=Resource.choices, required=False)
    trials = serializers.IntegerField(min_value=1, required=False)
    shards = serializers.IntegerField(min_value=1, required=False)
    model = serializers.ChoiceField(choices=RateModel.choices, required=False)
    messages = serializers.ChoiceField(choices=MessageSource.choices, required=False)
    decoder = serializers.ChoiceField(choices=Decoder.choices, required=False)
    transcript = serializers.CharField(required=False, allow_null=True)

    restarts = serializers.IntegerField(min_value=1, required=False)
    tol = serializers.FloatField(min_value=0.0, required=False)
    maxiter = serializers.IntegerField(min_value=1, required=False)
    line_search_grid = serializers.IntegerField(min_value=2, required=False)
    refine_iters = serializers.IntegerField(min_value=0, required=False)
    step_weights = serializers.ChoiceField(choices=StepWeights.choices, required=False)

    samples = serializers.IntegerField(min_value=1, required=False)
    instances = serializers.IntegerField(min_value=1, required=False)
    verify = serializers.BooleanField(required=False)

    def validate_tol(self, value: float) -> float:
        if value <= 0:
            raise serializers.ValidationError('tol must be positive.')
        return value

    def validate_epsilons(self, value: str) -> list[float]:
        try:
            epsilons = [float(part) for part in value.split(',') if part.strip()]
        except ValueError:
            raise serializers.ValidationError('epsilons must be a comma-separated list of numbers.')
        if not epsilons or any(not 0.0 <= eps <= 1.0 for eps in epsilons):
            raise serializers.ValidationError('epsilons must be non-empty and lie in [0, 1].')
        return epsilons

    def validate(self, attrs: dict[str, Any]) -> dict[str, Any]:
        command = attrs['command']
        output = attrs.get('output', OutputFormat.HUMAN)

        if output != OutputFormat.HUMAN and attrs.get('seed') is None:
            raise serializers.ValidationError({'seed': f'--seed is required for {output} output.'})
        if attrs.get('seed') is None:
            attrs['seed'] = self.context.get('default_seed')

        if command in CHANNEL_COMMANDS:
            channel = attrs.get('channel')
            channel_file = attrs.get('channel_file')
            epsilon = attrs.get('epsilon')
            if channel_file:
                if channel:
                    raise serializers.ValidationError('Give either --channel or --channel-file, not both.')
            elif channel is None:
                raise serializers.ValidationError({'channel': 'A channel is required.'})
            elif channel == ChannelName.TWO and epsilon is None:
                raise serializers.ValidationError({'epsilon': 'Channel two requires --epsilon.'})
            elif channel == ChannelName.ONE and epsilon is not None:
                raise serializers.ValidationError({'epsilon': 'Channel one takes no --epsilon.'})

        return attrs


class ProvenanceSerializer(serializers.Serializer):
    tool = serializers.CharField()
    version = serializers.CharField()
    command = serializers.CharField()
    seed = serializers.IntegerField(allow_null=True)
    config = serializers.DictField()


class RateReportSerializer(serializers.Serializer):
    r1 = serializers.FloatField()
    r2 = serializers.FloatField()
    sum_rate = serializers.FloatField()
    sum_stderr = serializers.FloatField(allow_null=True)
    log_base = serializers.CharField()


class TrialStatsSerializer(serializers.Serializer):
    n = serializers.IntegerField()
    errors_1 = serializers.IntegerField()
    errors_2 = serializers.IntegerField()
    erasures_1 = serializers.IntegerField()
    erasures_2 = serializers.IntegerField()
    error_fraction_1 = serializers.SerializerMethodField()
    error_fraction_2 = serializers.SerializerMethodField()
    erasure_fraction_1 = serializers.SerializerMethodField()
    erasure_fraction_2 = serializers.SerializerMethodField()

    def get_error_fraction_1(self, obj: TrialStats) -> float:
        return obj.error_fraction(1)

    def get_error_fraction_2(self, obj: TrialStats) -> float:
        return obj.error_fraction(2)

    def get_erasure_fraction_1(self, obj: TrialStats) -> float:
        return obj.erasure_fraction(1)

    def get_erasure_fraction_2(self, obj: TrialStats) -> float:
        return obj.erasure_fraction(2)


class OptResultSerializer(serializers.Serializer):
    best_sum_rate = serializers.FloatField()
    log_base = serializers.CharField()
    iterations = serializers.IntegerField()
    converged = serializers.BooleanField()
    restarts = serializers.IntegerField()
    best_vectors = serializers.SerializerMethodField()
    best_distributions = serializers.SerializerMethodField()
    start = serializers.SerializerMethodField()
    histogram = serializers.DictField(child=serializers.IntegerField(), allow_null=True)

    def get_best_vectors(self, obj: OptResult) -> list[list[float]]:
        return [[float(v) for v in x] for x in obj.best_vectors]

    def get_best_distributions(self, obj: OptResult) -> list[list[float]]:
        return [[float(v) for v in d] for d in obj.best_distributions]

    def get_start(self, obj: OptResult) -> Optional[list[list[float]]]:
        if obj.start is None:
            return None
        return [[float(v) for v in x] for x in obj.start]


class BoundsRowSerializer(serializers.Serializer):
    epsilon = serializers.FloatField()
    log_base = serializers.CharField()
    classical_bound = serializers.FloatField()
    classical_bound_bits = serializers.FloatField()
    classical_bound_nats = serializers.FloatField()
    quantum_lower_bound = serializers.FloatField()
    quantum_upper_bound = serializers.FloatField()
    super_quantum_rate = serializers.FloatField()


class SeparationsRowSerializer(BoundsRowSerializer):
    optimizer_classical = serializers.FloatField()
    classical_below_quantum = serializers.BooleanField()
    quantum_below_super_quantum = serializers.BooleanField()
    closed_form_separates = serializers.BooleanField()


class ChshRowSerializer(serializers.Serializer):
    box = serializers.CharField()
    win_probability = serializers.FloatField()
    chsh_value = serializers.FloatField()
    nonsignaling = serializers.BooleanField()
    sampled_win = serializers.FloatField()


class SuiteCheckSerializer(serializers.Serializer):
    name = serializers.CharField()
    instances = serializers.IntegerField()
    failures = serializers.IntegerField()
    worst = serializers.FloatField()
    passed = serializers.BooleanField()
