import itertools
import math

import numpy as np
import pytest

from boxes.correlations import (
    TSIRELSON_WIN,
    all_deterministic_strategies,
    best_deterministic_win,
    box_table,
    chsh_value,
    chsh_win_probability,
    correlator,
    deterministic_box,
    estimate_win_probability,
    is_nonsignaling,
    mix_boxes,
    pr_box,
    sample_box,
    sample_boxes,
    tsirelson_box,
    uniform_box,
)
from boxes.models import CorrelationBox, DeterministicStrategy
from core.exceptions import InvalidBoxError

from .factories import NonsignalingMixtureFactory, SharedRandomnessBoxFactory


class TestChshValues:
    def test_pr_box_always_wins(self):
        assert chsh_win_probability(pr_box()) == 1.0
        assert chsh_value(pr_box()) == pytest.approx(4.0)

    def test_tsirelson_box(self):
        assert abs(chsh_win_probability(tsirelson_box()) - math.cos(math.pi / 8) ** 2) < 1e-12
        assert chsh_value(tsirelson_box()) == pytest.approx(2 * math.sqrt(2), abs=1e-12)

    def test_uniform_box(self):
        assert chsh_win_probability(uniform_box()) == pytest.approx(0.5)
        assert chsh_value(uniform_box()) == pytest.approx(0.0)

    def test_correlators_of_pr_box(self):
        assert [correlator(pr_box(), x, y) for x, y in itertools.product((0, 1), repeat=2)] == [1, 1, 1, -1]


class TestDeterministic:
    def test_sixteen_strategies(self):
        strategies = all_deterministic_strategies()
        assert len(strategies) == 16
        assert len({(s.fa, s.fb) for s in strategies}) == 16

    def test_brute_force_maximum_is_three_quarters(self):
        win, strategy = best_deterministic_win()
        assert win == 0.75
        assert chsh_win_probability(deterministic_box(strategy)) == 0.75

    def test_every_deterministic_box_is_local(self):
        for strategy in all_deterministic_strategies():
            box = deterministic_box(strategy)
            assert chsh_win_probability(box) <= 0.75
            assert chsh_value(box) <= 2.0 + 1e-12
            assert is_nonsignaling(box)

    def test_strategy_label(self):
        box = deterministic_box(DeterministicStrategy(fa=(0, 1), fb=(1, 1)))
        assert box.label == 'deterministic[fa=01 fb=11]'

    def test_rejects_non_bits(self):
        with pytest.raises(InvalidBoxError):
            DeterministicStrategy(fa=(0, 2), fb=(0, 0))


class TestMixtures:
    def test_shared_randomness_never_beats_three_quarters(self):
        for _ in range(1000):
            assert chsh_win_probability(SharedRandomnessBoxFactory()) <= 0.75 + 1e-12

    def test_mixtures_stay_nonsignaling(self):
        for _ in range(100):
            assert is_nonsignaling(NonsignalingMixtureFactory())

    def test_mixture_win_is_linear(self):
        box = mix_boxes([pr_box(), uniform_box()], [0.25, 0.75])
        assert chsh_win_probability(box) == pytest.approx(0.25 + 0.75 * 0.5)

    def test_rejects_bad_weights(self):
        with pytest.raises(InvalidBoxError):
            mix_boxes([pr_box(), uniform_box()], [0.5, 0.6])
        with pytest.raises(InvalidBoxError):
            mix_boxes([pr_box()], [0.5, 0.5])


class TestValidation:
    def test_signaling_box_is_flagged(self):
        table = np.zeros((2, 2, 2, 2))
        for x, y in itertools.product((0, 1), repeat=2):
            table[x, y, y, 0] = 1.0  # Alice's output reveals Bob's input
        assert not is_nonsignaling(CorrelationBox(table, label='signaling'))

    def test_rejects_bad_shape(self):
        with pytest.raises(InvalidBoxError):
            CorrelationBox(np.full((2, 2, 4), 0.25))

    def test_rejects_columns_not_summing_to_one(self):
        table = np.full((2, 2, 2, 2), 0.25)
        table[1, 1, 0, 0] = 0.5
        with pytest.raises(InvalidBoxError):
            CorrelationBox(table)


class TestSampling:
    def test_pr_samples_always_win(self, rng):
        x = rng.integers(0, 2, size=5000)
        y = rng.integers(0, 2, size=5000)
        a, b = sample_boxes(pr_box(), x, y, rng)
        assert np.all((a ^ b) == (x & y))
        assert np.mean(a) == pytest.approx(0.5, abs=0.03)

    def test_single_sample(self):
        a, b = sample_box(pr_box(), 1, 1, 3)
        assert a ^ b == 1

    def test_tsirelson_estimate(self, rng):
        assert estimate_win_probability(tsirelson_box(), 100_000, rng) == pytest.approx(TSIRELSON_WIN, abs=0.01)

    def test_rejects_non_bit_questions(self):
        with pytest.raises(InvalidBoxError):
            sample_boxes(pr_box(), [2], [0])

    def test_box_table_rows(self):
        lines = box_table(pr_box()).splitlines()
        assert lines[0] == 'pr'
        assert len(lines) == 6
        assert lines[-1].startswith(' 1 1 |')
