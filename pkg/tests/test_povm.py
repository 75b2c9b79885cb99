import math

import numpy as np
import pytest

from boxes.correlations import all_deterministic_strategies, pr_box, tsirelson_box, uniform_box
from core.exceptions import HemisphereEmptyError, InvalidPovmError, InvalidStrategyError
from povm.models import Hemisphere, Povm, PovmElement, ProjectorAngles, SharedState
from povm.operators import (
    bloch_vector,
    measurement_povm,
    outcome_probability,
    outcome_probability_matrix,
    outcome_table,
    projector,
    random_povm,
    refine_povm,
    tsirelson_povms,
)
from povm.replication import (
    MESSAGE_PAIRS,
    CandidateStrategy,
    classical_replication,
    hemisphere_select,
    perfect_quantum_impossible_check,
    replicate_classically,
    replication_choice,
)
from povm.suite import run_povm_suite

from .factories import PovmFactory, SharedStateFactory


def element(theta, phi, gamma=1.0):
    return PovmElement(gamma, ProjectorAngles.normalized(theta, phi))


class TestAngles:
    def test_normalized_wraps_the_azimuth(self):
        assert ProjectorAngles.normalized(0.3, 2 * math.pi + 0.1).phi == pytest.approx(0.1)
        assert ProjectorAngles.normalized(0.3, -0.1).phi == pytest.approx(2 * math.pi - 0.1)

    def test_rejects_out_of_range_angles(self):
        with pytest.raises(InvalidPovmError):
            ProjectorAngles(2.0, 0.0)
        with pytest.raises(InvalidPovmError):
            ProjectorAngles(0.5, 7.0)

    def test_complement_is_orthogonal(self):
        angles = ProjectorAngles(0.4, 1.3)
        p, q = projector(angles), projector(angles.complement())
        assert np.allclose(p + q, np.eye(2))
        assert abs(np.trace(p @ q)) < 1e-12

    def test_bloch_vector_is_unit(self):
        assert np.linalg.norm(bloch_vector(ProjectorAngles(0.7, 2.0))) == pytest.approx(1.0)

    def test_poles(self):
        assert ProjectorAngles(0.0, 1.0).is_polar
        assert not ProjectorAngles(0.3, 1.0).is_polar


class TestPovms:
    def test_measurement_povm_is_complete(self):
        povm = measurement_povm(0.3, 0.9)
        assert len(povm) == 2
        assert np.allclose(sum(e.matrix() for e in povm), np.eye(2))

    def test_incomplete_povm_is_rejected(self):
        with pytest.raises(InvalidPovmError):
            Povm((element(0.0, 0.0),))

    def test_random_povms_are_complete(self):
        for _ in range(50):
            povm = PovmFactory()
            assert 2 <= len(povm) <= 4
            assert np.allclose(sum(e.matrix() for e in povm), np.eye(2), atol=1e-10)

    def test_refine_splits_mixed_operators(self):
        povm = refine_povm([np.eye(2) / 2, np.eye(2) / 2])
        assert len(povm) == 4
        assert [e.gamma for e in povm] == pytest.approx([0.5] * 4)

    def test_refine_rejects_incomplete_sets(self):
        with pytest.raises(InvalidPovmError):
            refine_povm([np.eye(2) / 2])
        with pytest.raises(InvalidPovmError):
            refine_povm([np.diag([1.5, 0.5]), np.diag([-0.5, 0.5])])

    def test_shared_state_validation(self):
        with pytest.raises(InvalidPovmError):
            SharedState(1.0, 0.0)
        with pytest.raises(InvalidPovmError):
            SharedState(0.5, 0.5)


class TestOutcomeProbabilities:
    def test_formula_matches_matrix_evaluation(self):
        for _ in range(200):
            povm_1, povm_2, state = PovmFactory(), PovmFactory(), SharedStateFactory()
            for e1 in povm_1:
                for e2 in povm_2:
                    assert abs(
                        outcome_probability(state, e1, e2) - outcome_probability_matrix(state, e1, e2)
                    ) < 1e-10

    def test_outcomes_sum_to_one(self):
        for _ in range(100):
            table = outcome_table(SharedStateFactory(), PovmFactory(), PovmFactory())
            assert table.sum() == pytest.approx(1.0, abs=1e-9)
            assert np.all(table >= -1e-12)

    def test_tsirelson_measurements_reproduce_the_box(self):
        alice, bob, state = tsirelson_povms()
        box = tsirelson_box()
        for x in (0, 1):
            for y in (0, 1):
                assert np.allclose(outcome_table(state, alice[x], bob[y]), box.pmf[x, y], atol=1e-12)

    def test_zero_when_both_terms_vanish(self):
        state = SharedStateFactory()
        assert outcome_probability(state, element(0.0, 0.0), element(math.pi / 2, 0.0)) == pytest.approx(0.0)

    def test_zero_when_terms_cancel(self):
        state = SharedState.maximally_entangled()
        e1, e2 = element(math.pi / 4, 0.4), element(math.pi / 4, math.pi - 0.4)
        assert outcome_probability(state, e1, e2) == pytest.approx(0.0, abs=1e-15)

    def test_positive_otherwise(self):
        state = SharedState.maximally_entangled()
        e1, e2 = element(math.pi / 4, 0.4), element(math.pi / 6, math.pi - 0.4)
        assert outcome_probability(state, e1, e2) > 1e-6


class TestHemispheres:
    def test_selects_by_azimuth(self):
        povm = measurement_povm(math.pi / 4, 0.5)
        assert hemisphere_select(povm, Hemisphere.EAST) == 0
        assert hemisphere_select(povm, Hemisphere.WEST) == 1

    def test_boundary_belongs_to_the_west(self):
        povm = Povm((element(math.pi / 4, math.pi), element(math.pi / 4, 0.0)))
        assert hemisphere_select(povm, Hemisphere.WEST) == 0
        assert hemisphere_select(povm, Hemisphere.EAST) == 1

    def test_empty_hemisphere(self):
        povm = refine_povm([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
        with pytest.raises(HemisphereEmptyError):
            hemisphere_select(povm, Hemisphere.WEST)

    def test_unknown_hemisphere(self):
        with pytest.raises(InvalidStrategyError):
            hemisphere_select(measurement_povm(0.3, 0.3), 'north')


class TestReplication:
    def test_replicated_pair_has_positive_probability(self):
        for _ in range(500):
            povm_1, povm_2, state = PovmFactory(), PovmFactory(), SharedStateFactory()
            i, j = classical_replication(0, 0, {0: povm_1}, {0: povm_2}, state)
            assert outcome_probability(state, povm_1[i], povm_2[j]) > 1e-12

    def test_fallback_when_a_hemisphere_is_empty(self):
        only_east = refine_povm([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
        choice = replication_choice(0, 0, {0: only_east}, {0: only_east}, SharedState.maximally_entangled())
        assert choice.fallback
        assert choice.probability > 0

    def test_replica_is_deterministic(self):
        alice, bob, state = tsirelson_povms()
        replica, local = replicate_classically(alice, bob, state)
        for pair in MESSAGE_PAIRS:
            table = replica.outcomes[pair]
            assert table.sum() == 1.0
            assert np.count_nonzero(table) == 1
        assert isinstance(local, bool)


class TestPerfectCodes:
    def test_pr_box_is_a_perfect_code(self):
        assert perfect_quantum_impossible_check(CandidateStrategy.from_box(pr_box()))

    def test_tsirelson_and_uniform_are_not(self):
        assert not perfect_quantum_impossible_check(CandidateStrategy.from_box(tsirelson_box()))
        assert not perfect_quantum_impossible_check(CandidateStrategy.from_box(uniform_box()))
        alice, bob, state = tsirelson_povms()
        assert not perfect_quantum_impossible_check(CandidateStrategy.from_povms(alice, bob, state))

    def test_no_deterministic_strategy_is_perfect(self):
        for strategy in all_deterministic_strategies():
            assert not perfect_quantum_impossible_check(CandidateStrategy.from_deterministic(strategy))

    def test_candidate_validation(self):
        with pytest.raises(InvalidStrategyError):
            CandidateStrategy({(0, 0): np.ones((1, 1))}, {0: (0,)}, {0: (0,)})


class TestSuite:
    def test_small_suite_passes(self):
        checks = run_povm_suite(50, 4)
        assert [check.name for check in checks] == [
            'formula-vs-matrix', 'probabilities-sum-to-one', 'replication-positive', 'tsirelson-statistics',
        ]
        assert all(check.passed for check in checks)
