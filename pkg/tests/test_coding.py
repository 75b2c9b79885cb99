import itertools
import math

import numpy as np
import pytest

from boxes.correlations import TSIRELSON_WIN, pr_box
from coding.encoders import decode, decode_outputs, encode_box, encode_one_bit_comm
from coding.models import Decoder, MessageSource, RateModel, Strategy, StrategyKind, TrialStats, merge_stats
from coding.trials import (
    TRANSCRIPT_HEADER,
    assert_error_free,
    classical_strategy,
    empirical_rate,
    errs_when_unerased,
    fixed_strategy,
    one_bit_strategy,
    pr_strategy,
    resolve_rate_model,
    run_sharded,
    run_trials,
    strategy_for_resource,
    tsirelson_strategy,
)
from core.exceptions import ConfigurationError, DecodeError, InvalidStrategyError, RateModelError
from interference.channels import CHANNEL_TWO_LIVE_CELLS, ERASED, build_channel_two, channel_one_output
from interference.models import LogBase, ProductDistribution


class TestEncoders:
    def test_one_bit_encoding_hits_the_message_cell(self):
        for m1, m2 in itertools.product((0, 1), repeat=2):
            x1, x2 = encode_one_bit_comm(m1, m2)
            assert (x1, x2) in CHANNEL_TWO_LIVE_CELLS
            assert channel_one_output(x1, x2) == (m1, m2)

    def test_pr_encoding_hits_the_message_cell(self, rng):
        for m1, m2 in itertools.product((0, 1), repeat=2):
            for _ in range(20):
                x1, x2 = encode_box(m1, m2, pr_box(), rng)
                assert channel_one_output(x1, x2) == (m1, m2)

    def test_decode(self):
        assert decode(1, ERASED) == (1, None)
        assert decode(0, 1, erasure_symbol=None) == (0, 1)

    def test_identity_decoder_guesses_on_erasure(self, rng):
        y = np.array([0, 1, ERASED, ERASED])
        assert np.array_equal(decode_outputs(y, ERASED, Decoder.ERASURE_AWARE), y)
        guessed = decode_outputs(y, ERASED, Decoder.IDENTITY, rng)
        assert np.array_equal(guessed[:2], [0, 1])
        assert set(guessed[2:]) <= {0, 1}


class TestStrategies:
    def test_box_required_for_box_assisted(self):
        with pytest.raises(InvalidStrategyError):
            Strategy(StrategyKind.BOX_ASSISTED, 'missing')

    def test_unknown_resource(self):
        with pytest.raises(ConfigurationError):
            strategy_for_resource('telepathy')

    def test_errs_when_unerased(self, channel_one, channel_two):
        assert not errs_when_unerased(channel_one, pr_strategy())
        assert not errs_when_unerased(channel_one, one_bit_strategy())
        assert not errs_when_unerased(channel_two, tsirelson_strategy())
        assert errs_when_unerased(channel_one, tsirelson_strategy())
        assert errs_when_unerased(channel_one, classical_strategy())
        assert errs_when_unerased(channel_two, pr_strategy(Decoder.IDENTITY))

    def test_rate_model_resolution(self, channel_one, channel_two):
        assert resolve_rate_model(channel_two, pr_strategy()) == RateModel.ERASURE_CHANNEL
        assert resolve_rate_model(channel_one, one_bit_strategy()) == RateModel.ERASURE_CHANNEL
        assert resolve_rate_model(channel_one, classical_strategy()) == RateModel.PLUG_IN_MI
        assert resolve_rate_model(channel_one, pr_strategy(), RateModel.PLUG_IN_MI) == RateModel.PLUG_IN_MI


class TestRunTrials:
    def test_pr_box_on_channel_one_is_error_free(self, channel_one, rng):
        stats = run_trials(channel_one, pr_strategy(), n=20_000, rng=rng)
        assert stats.errors_1 == stats.errors_2 == 0
        assert stats.erasures_1 == stats.erasures_2 == 0
        rate = empirical_rate(stats, RateModel.ERASURE_CHANNEL)
        assert rate.sum_rate == 2.0
        assert rate.sum_stderr == 0.0

    def test_one_bit_exhaustive_cycle(self, channel_one):
        stats = run_trials(channel_one, one_bit_strategy(), MessageSource.EXHAUSTIVE, n=400, rng=1)
        assert stats.errors_1 == stats.errors_2 == 0
        assert np.array_equal(stats.joint_1, [[200, 0], [0, 200]])

    def test_zero_epsilon_erases_everything(self, rng):
        stats = run_trials(build_channel_two(0.0), pr_strategy(), n=1000, rng=rng)
        assert stats.erasures_1 == stats.erasures_2 == 1000
        assert empirical_rate(stats, RateModel.ERASURE_CHANNEL).sum_rate == 0.0

    def test_quantum_strategy_on_channel_two(self, rng):
        epsilon = 0.2
        stats = run_trials(build_channel_two(epsilon), tsirelson_strategy(), n=200_000, rng=rng)
        assert stats.errors_1 == stats.errors_2 == 0
        rate = empirical_rate(stats, RateModel.ERASURE_CHANNEL)
        assert abs(rate.sum_rate - 2 * TSIRELSON_WIN * epsilon) < 4 * rate.sum_stderr
        erasure = math.sin(math.pi / 8) ** 2 + (1 - epsilon) * TSIRELSON_WIN
        assert stats.erasure_fraction(1) == pytest.approx(erasure, abs=0.005)

    def test_classical_strategy_errs_on_channel_one(self, channel_one, rng):
        strategy = classical_strategy()
        stats = run_trials(channel_one, strategy, n=20_000, rng=rng)
        assert stats.errors_1 > 0
        assert_error_free(stats, channel_one, strategy)
        rate = empirical_rate(stats, RateModel.PLUG_IN_MI)
        assert 0.0 < rate.sum_rate < 2.0

    def test_fixed_distribution_rate_one_scheme(self, channel_one, rng):
        dist = ProductDistribution(np.array([0.5, 0.5, 0.0, 0.0]), np.array([0.3, 0.0, 0.7, 0.0]))
        stats = run_trials(channel_one, fixed_strategy(dist), n=50_000, rng=rng)
        assert stats.joint_1.shape == (4, 2)
        rate = empirical_rate(stats, RateModel.PLUG_IN_MI)
        assert rate.r1 == pytest.approx(1.0, abs=0.01)
        assert rate.r2 < 0.01
        with pytest.raises(RateModelError):
            empirical_rate(stats, RateModel.ERASURE_CHANNEL)

    def test_reports_in_nats(self, channel_one):
        stats = run_trials(channel_one, pr_strategy(), n=100, rng=2)
        assert empirical_rate(stats, RateModel.ERASURE_CHANNEL, LogBase.NATS).sum_rate == pytest.approx(2 * math.log(2))

    def test_rejects_zero_trials(self, channel_one):
        with pytest.raises(ConfigurationError):
            run_trials(channel_one, pr_strategy(), n=0)


class TestShards:
    def test_sharded_runs_are_reproducible(self, channel_two):
        first = run_sharded(channel_two, tsirelson_strategy(), MessageSource.UNIFORM, 5000, 11, 4)
        second = run_sharded(channel_two, tsirelson_strategy(), MessageSource.UNIFORM, 5000, 11, 4)
        assert first.n == 5000
        assert (first.erasures_1, first.erasures_2) == (second.erasures_1, second.erasures_2)
        assert np.array_equal(first.joint_2, second.joint_2)

    def test_transcript_rows_number_every_trial(self, channel_two):
        stats = run_sharded(channel_two, pr_strategy(), MessageSource.EXHAUSTIVE, 10, 3, 3, transcript=True)
        assert len(stats.transcript) == 10
        assert [row[0] for row in stats.transcript] == [str(k) for k in range(10)]
        assert all(len(row) == len(TRANSCRIPT_HEADER) for row in stats.transcript)
        assert [row[1:3] for row in stats.transcript[:4]] == [('0', '0'), ('0', '1'), ('1', '0'), ('1', '1')]

    def test_rejects_more_shards_than_trials(self, channel_two):
        with pytest.raises(ConfigurationError):
            run_sharded(channel_two, pr_strategy(), MessageSource.UNIFORM, 2, 1, 3)


class TestStatsAccounting:
    def test_merge_sums_counts(self):
        first = TrialStats(n=10, errors_1=1, erasures_2=2)
        second = TrialStats(n=5, errors_1=2, erasures_1=1)
        merged = merge_stats(first, second)
        assert (merged.n, merged.errors_1, merged.erasures_1, merged.erasures_2) == (15, 3, 1, 2)

    def test_rejects_impossible_counts(self):
        with pytest.raises(InvalidStrategyError):
            TrialStats(n=3, errors_1=2, erasures_1=2)

    def test_erasure_model_rejects_errors(self):
        with pytest.raises(RateModelError):
            empirical_rate(TrialStats(n=10, errors_2=1), RateModel.ERASURE_CHANNEL)

    def test_auto_model_must_be_resolved(self):
        with pytest.raises(ConfigurationError):
            empirical_rate(TrialStats(n=10), RateModel.AUTO)

    def test_perfect_strategy_with_errors_is_a_decode_error(self, channel_one):
        with pytest.raises(DecodeError):
            assert_error_free(TrialStats(n=10, errors_1=1), channel_one, pr_strategy())
