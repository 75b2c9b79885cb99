"""
Desk-scale reproductions of the headline results. Deselected by default;
run with `pytest -m slow`.
"""
import io
import json
import math
import time

import numpy as np
import pytest
from django.core.management import call_command

from boxes.correlations import (
    TSIRELSON_WIN,
    best_deterministic_win,
    chsh_win_probability,
    estimate_win_probability,
    pr_box,
    tsirelson_box,
)
from bounds.capacity import first_order_gap_slope, first_order_gaps
from bounds.channel_two import (
    classical_bound_channel_two,
    classical_bound_numeric,
    quantum_bound_channel_two,
    quantum_lower_bound,
    rate_one_scheme_check,
    super_quantum_rate,
    verify_greek_constraint,
)
from bounds.models import FiveSymbolInput
from coding.models import MessageSource, RateModel
from coding.trials import empirical_rate, one_bit_strategy, pr_strategy, run_trials, tsirelson_strategy
from interference.channels import build_channel_one, build_channel_two
from interference.information import joint_rate
from interference.models import LogBase, ProductDistribution
from optimizer.descent import multi_restart
from optimizer.models import OptimizerConfig
from povm.suite import run_povm_suite

from .factories import ProductDistributionFactory

pytestmark = pytest.mark.slow

EPSILONS = (0.05, 0.1, 0.2)


def test_pr_box_doubles_channel_one():
    started = time.perf_counter()
    stats = run_trials(build_channel_one(), pr_strategy(), n=100_000, rng=7)
    assert stats.errors_1 == stats.errors_2 == 0
    assert empirical_rate(stats, RateModel.ERASURE_CHANNEL).sum_rate == 2.0
    assert time.perf_counter() - started < 5.0


def test_one_bit_communication_is_error_free():
    stats = run_trials(build_channel_one(), one_bit_strategy(), MessageSource.EXHAUSTIVE, n=4 * 10_000, rng=1)
    assert stats.errors_1 == stats.errors_2 == 0
    assert stats.joint_1.sum() == 40_000


def test_classical_optimizer_finds_one_bit():
    started = time.perf_counter()
    result = multi_restart(build_channel_one(), OptimizerConfig(tol=1e-6, restarts=1000), 20240501)
    assert 1.0 - 1e-4 <= result.best_sum_rate <= 1.0 + 1e-4
    assert time.perf_counter() - started < 120.0

    # Rate-one schemes are maximizers.
    dist = ProductDistribution(np.array([0.5, 0.5, 0.0, 0.0]), np.array([0.4, 0.0, 0.6, 0.0]))
    assert joint_rate(build_channel_one(), dist).sum_rate == pytest.approx(result.best_sum_rate, abs=1e-4)


def test_chsh_values():
    assert best_deterministic_win()[0] == 0.75
    assert abs(chsh_win_probability(tsirelson_box()) - math.cos(math.pi / 8) ** 2) < 1e-12
    assert estimate_win_probability(tsirelson_box(), 100_000, 3) == pytest.approx(TSIRELSON_WIN, abs=0.01)
    assert chsh_win_probability(pr_box()) == 1.0


@pytest.mark.parametrize('epsilon', EPSILONS)
def test_channel_two_rates(epsilon):
    spec = build_channel_two(epsilon)

    pr = empirical_rate(run_trials(spec, pr_strategy(), n=200_000, rng=11), RateModel.ERASURE_CHANNEL)
    assert abs(pr.sum_rate - 2 * epsilon) <= 3 * pr.sum_stderr

    stats = run_trials(spec, tsirelson_strategy(), n=200_000, rng=13)
    quantum = empirical_rate(stats, RateModel.ERASURE_CHANNEL)
    assert abs(quantum.sum_rate - 2 * TSIRELSON_WIN * epsilon) <= 3 * quantum.sum_stderr

    erasure = math.sin(math.pi / 8) ** 2 + (1 - epsilon) * TSIRELSON_WIN
    stderr = math.sqrt(erasure * (1 - erasure) / stats.n)
    assert abs(stats.erasure_fraction(1) - erasure) <= 3 * stderr


def test_channel_two_optimizer_respects_classical_bound():
    epsilon = 0.1
    result = multi_restart(build_channel_two(epsilon), OptimizerConfig(restarts=200), 5)
    # The bound is first order; allow for the epsilon^2 term.
    assert result.best_sum_rate <= classical_bound_channel_two(epsilon) + epsilon**2


def test_first_order_formula_is_second_order_accurate():
    inp = FiveSymbolInput.symmetric(p_q=0.2, epsilon=0.1)
    epsilons = [1e-2, 1e-3, 1e-4]
    scaled = first_order_gaps(inp, epsilons) / np.square(epsilons)
    assert scaled.max() / scaled.min() < 1.1
    assert first_order_gap_slope(inp, epsilons) == pytest.approx(2.0, abs=0.1)


def test_classical_bound_optimum():
    value, weights = classical_bound_numeric(LogBase.NATS, starts=50, rng=1)
    assert value == pytest.approx(0.75 * math.log(16 / 3), abs=1e-4)
    assert value == pytest.approx(1.2555, abs=1e-4)
    assert np.allclose(weights.k, 0.25, atol=1e-4)
    assert np.allclose(weights.letters, 0.75, atol=1e-4)

    for _ in range(10_000):
        dist = ProductDistributionFactory()
        assert verify_greek_constraint(dist.d1, dist.d2).total <= 3.0 + 1e-9


def test_quantum_upper_bound_separates_from_super_quantum():
    for epsilon in np.linspace(0.01, 1.0, 100):
        assert quantum_bound_channel_two(epsilon) < super_quantum_rate(epsilon)
    assert quantum_bound_channel_two(1.0) == pytest.approx(1.902, abs=1e-3)


def test_povm_suite():
    checks = run_povm_suite(10_000, 20240501)
    assert all(check.passed for check in checks)


def test_rate_one_scheme_second_pair_is_silent():
    for c in np.linspace(0.0, 1.0, 100):
        assert abs(rate_one_scheme_check(float(c))) < 1e-12


def test_separations_report_flags_each_epsilon():
    out = io.StringIO()
    call_command('separations', '--epsilons', '0.05,0.1,0.2', '--restarts', '50', '--seed', '17',
                 '--output', 'json', stdout=out)
    rows = json.loads(out.getvalue())['rows']
    assert [row['epsilon'] for row in rows] == list(EPSILONS)
    for row in rows:
        assert row['classical_below_quantum'] == (row['optimizer_classical'] < row['quantum_lower_bound'])
        assert row['quantum_below_super_quantum']
        # The first-order classical bound alone does not separate.
        assert not row['closed_form_separates']
        assert row['classical_bound'] > quantum_lower_bound(row['epsilon'])
