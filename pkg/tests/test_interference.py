import itertools
import math

import numpy as np
import pytest

from core.exceptions import InvalidDistributionError
from interference.channels import (
    CHANNEL_TWO_LIVE_CELLS,
    ERASED,
    build_channel,
    build_channel_two,
    channel_by_name,
    channel_one_output,
    pair_marginal,
    sample_output,
    sample_outputs,
)
from interference.information import (
    batched_sum_rate,
    binary_entropy,
    bsc_capacity,
    entropy,
    joint_rate,
    mutual_information,
)
from interference.models import LogBase, Pair, ProductDistribution, RateReport, input_label, input_symbol
from interference.textformat import dump_channel, load_channel

from .factories import ProductDistributionFactory


def bit_form_output(x1, x2):
    """Channel I written with bits: x = (u, v), y_i = u_i + v1 + v2 + u1 u2 (mod 2)."""
    u1, v1 = x1 >> 1, x1 & 1
    u2, v2 = x2 >> 1, x2 & 1
    shared = v1 ^ v2 ^ (u1 & u2)
    return u1 ^ shared, u2 ^ shared


class TestChannelOne:
    def test_table_matches_bit_form(self):
        for x1, x2 in itertools.product(range(4), repeat=2):
            assert channel_one_output(x1, x2) == bit_form_output(x1, x2)

    def test_every_input_pair_has_one_output(self, channel_one):
        assert channel_one.pmf.shape == (4, 4, 2, 2)
        assert np.all(channel_one.pmf.reshape(16, 4).max(axis=1) == 1.0)

    def test_flipping_both_second_bits_leaves_table_unchanged(self, channel_one):
        flip = [1, 0, 3, 2]
        assert np.array_equal(channel_one.pmf[flip][:, flip], channel_one.pmf)

    def test_pmf_is_read_only(self, channel_one):
        with pytest.raises(ValueError):
            channel_one.pmf[0, 0, 0, 0] = 0.5

    def test_rate_one_scheme(self, channel_one):
        dist = ProductDistribution(np.array([0.5, 0.5, 0.0, 0.0]), np.array([0.3, 0.0, 0.7, 0.0]))
        report = joint_rate(channel_one, dist)
        assert report.r1 == pytest.approx(1.0, abs=1e-12)
        assert report.r2 == pytest.approx(0.0, abs=1e-12)

    def test_uniform_inputs_carry_nothing(self, channel_one):
        assert joint_rate(channel_one, ProductDistribution.uniform()).sum_rate == pytest.approx(0.0, abs=1e-12)


class TestChannelTwo:
    @pytest.mark.parametrize('epsilon', [0.0, 0.3, 1.0])
    def test_rows_are_stochastic(self, epsilon):
        spec = build_channel_two(epsilon)
        assert np.allclose(spec.pmf.sum(axis=(2, 3)), 1.0)
        assert spec.erasure
        assert spec.output_labels(Pair.FIRST) == ('0', '1', 'E')

    def test_live_cells_carry_channel_one_output(self):
        spec = build_channel_two(0.3)
        for x1, x2 in itertools.product(range(4), repeat=2):
            if (x1, x2) in CHANNEL_TWO_LIVE_CELLS:
                y1, y2 = channel_one_output(x1, x2)
                assert spec.pmf[x1, x2, y1, y2] == pytest.approx(0.3)
                assert spec.pmf[x1, x2, ERASED, ERASED] == pytest.approx(0.7)
            else:
                assert spec.pmf[x1, x2, ERASED, ERASED] == 1.0

    def test_zero_epsilon_erases_everything(self):
        assert np.all(build_channel_two(0.0).pmf[:, :, ERASED, ERASED] == 1.0)

    def test_epsilon_out_of_range(self):
        with pytest.raises(InvalidDistributionError):
            build_channel_two(1.5)

    def test_rate_grows_with_epsilon(self):
        epsilons = np.linspace(0.0, 1.0, 21)
        channels = [build_channel_two(eps) for eps in epsilons]
        for _ in range(50):
            dist = ProductDistributionFactory()
            rates = [joint_rate(spec, dist).sum_rate for spec in channels]
            assert rates[0] == pytest.approx(0.0, abs=1e-12)
            assert all(later >= earlier - 1e-12 for earlier, later in zip(rates, rates[1:]))

    def test_marginal_of_a_point_mass_input_against_uniform_partner(self):
        # Only x2 in {00, 10} meets x1 = 00 on a live cell, and both deliver y1 = 0.
        spec = build_channel_two(1.0)
        dist = ProductDistribution(np.array([1.0, 0.0, 0.0, 0.0]), np.full(4, 0.25))
        assert np.allclose(pair_marginal(spec, dist, Pair.FIRST)[0], [0.5, 0.0, 0.5])

    def test_channel_by_name(self):
        assert channel_by_name('one').name == 'channel-one'
        assert channel_by_name('two', 0.1).epsilon == 0.1
        with pytest.raises(InvalidDistributionError):
            channel_by_name('two')
        with pytest.raises(InvalidDistributionError):
            channel_by_name('three')


class TestBuildChannel:
    def test_rejects_non_stochastic_rows(self):
        pmf = np.full((2, 2, 2, 2), 0.3)
        with pytest.raises(InvalidDistributionError):
            build_channel('bad', pmf)

    def test_rejects_small_alphabets(self):
        with pytest.raises(InvalidDistributionError):
            build_channel('tiny', np.ones((1, 2, 1, 1)))

    def test_accepts_other_alphabet_sizes(self):
        pmf = np.full((3, 2, 2, 2), 0.25)
        spec = build_channel('noise', pmf)
        assert spec.input_alphabet_sizes == (3, 2)


class TestSampling:
    def test_frequencies_follow_the_table(self, rng):
        spec = build_channel_two(0.3)
        n = 200_000
        y1, y2 = sample_outputs(spec, np.zeros(n, dtype=int), np.full(n, 2), rng)
        delivered = np.mean((y1 == 0) & (y2 == 1))
        erased = np.mean((y1 == ERASED) & (y2 == ERASED))
        assert delivered == pytest.approx(0.3, abs=0.005)
        assert erased == pytest.approx(0.7, abs=0.005)
        assert delivered + erased == 1.0

    @pytest.mark.parametrize('seed', [0, 1, 2, 3])
    def test_deterministic_cells(self, channel_one, seed):
        assert sample_output(channel_one, input_symbol(0, 1), input_symbol(1, 0), seed) == (1, 0)
        assert sample_output(build_channel_two(1.0), input_symbol(1, 1), input_symbol(1, 0), seed) == (1, 1)

    def test_half_erased_cell(self, rng):
        spec = build_channel_two(0.5)
        x1, x2 = input_symbol(1, 0), input_symbol(0, 0)
        outputs = [sample_output(spec, x1, x2, rng) for _ in range(100_000)]
        delivered = sum(output == (1, 0) for output in outputs) / len(outputs)
        assert delivered == pytest.approx(0.5, abs=0.01)
        assert set(outputs) == {(1, 0), (ERASED, ERASED)}

    def test_same_seed_same_outputs(self, channel_two):
        x = np.arange(16) % 4
        first = sample_outputs(channel_two, x, x[::-1], 5)
        second = sample_outputs(channel_two, x, x[::-1], 5)
        assert all(np.array_equal(a, b) for a, b in zip(first, second))

    def test_rejects_inputs_outside_alphabet(self, channel_one):
        with pytest.raises(InvalidDistributionError):
            sample_outputs(channel_one, [4], [0])

    def test_pair_marginal_rows_are_distributions(self, channel_two):
        marginal = pair_marginal(channel_two, ProductDistributionFactory(), Pair.SECOND)
        assert marginal.shape == (4, 3)
        assert np.allclose(marginal.sum(axis=1), 1.0)


class TestInformation:
    def test_entropies(self):
        assert entropy([0.25] * 4) == pytest.approx(2.0)
        assert entropy([0.5, 0.5], LogBase.NATS) == pytest.approx(math.log(2))
        assert entropy([1.0, 0.0]) == 0.0
        assert binary_entropy(0.5) == pytest.approx(1.0)
        assert binary_entropy(0.0) == 0.0
        assert entropy([3 / 16] * 4 + [1 / 4], LogBase.NATS) == pytest.approx(1.602, abs=1e-3)

    def test_mutual_information_extremes(self):
        assert mutual_information(np.full((2, 2), 0.25)) == pytest.approx(0.0, abs=1e-15)
        assert mutual_information(np.eye(2) / 2) == pytest.approx(1.0)
        with pytest.raises(InvalidDistributionError):
            mutual_information([0.5, 0.5])

    def test_bsc_capacity(self):
        assert bsc_capacity(0.0) == pytest.approx(1.0)
        assert bsc_capacity(0.5) == pytest.approx(0.0, abs=1e-15)
        assert bsc_capacity(0.11) == pytest.approx(1.0 - binary_entropy(0.11))

    def test_batched_rate_matches_joint_rate(self, channel_two):
        dists = [ProductDistributionFactory() for _ in range(8)]
        batched = batched_sum_rate(
            channel_two, np.stack([d.d1 for d in dists]), np.stack([d.d2 for d in dists])
        )
        for value, dist in zip(batched, dists):
            assert value == pytest.approx(joint_rate(channel_two, dist, LogBase.NATS).sum_rate, abs=1e-12)

    def test_rate_report(self):
        report = RateReport(r1=-1e-17, r2=0.5)
        assert report.r1 == 0.0
        assert report.sum_rate == 0.5
        with pytest.raises(InvalidDistributionError):
            RateReport(r1=0.0, r2=0.0, log_base='hartleys')

    def test_input_labels(self):
        assert input_symbol(1, 0) == 2
        assert input_label(3) == '11'
        with pytest.raises(InvalidDistributionError):
            input_label(4)


class TestTextFormat:
    def test_dump_then_load_keeps_the_table(self, channel_two):
        loaded = load_channel(dump_channel(channel_two))
        assert loaded.name == channel_two.name
        assert loaded.epsilon == 0.2
        assert loaded.erasure
        assert np.allclose(loaded.pmf, channel_two.pmf, atol=1e-12)

    def test_comment_lines_are_skipped(self, channel_one):
        text = '# tool=nonlocal-interference\n' + dump_channel(channel_one) + '# trailing note\n'
        assert np.array_equal(load_channel(text).pmf, channel_one.pmf)

    def test_header_format(self, channel_one):
        header = dump_channel(channel_one).splitlines()[0]
        assert header == 'name=channel-one inputs=4,4 outputs=2,2 erasure=no epsilon=-'

    def test_rejects_missing_rows(self, channel_one):
        text = '\n'.join(dump_channel(channel_one).splitlines()[:-1])
        with pytest.raises(InvalidDistributionError, match='probability rows'):
            load_channel(text)

    def test_rejects_missing_header_fields(self):
        with pytest.raises(InvalidDistributionError, match='missing'):
            load_channel('name=x inputs=2,2\n')

    def test_rejects_rows_that_do_not_sum_to_one(self):
        text = 'name=x inputs=2,2 outputs=2,2 erasure=no epsilon=-\n' + '0.5 0.5 0.5 0\n' * 4
        with pytest.raises(InvalidDistributionError):
            load_channel(text)
