"""
Randomized property checks over POVMs and shared states.
"""
import logging
from dataclasses import dataclass

import numpy as np

from boxes.correlations import tsirelson_box
from core.rng import SeedLike, spawn

from .models import Povm, SharedState
from .operators import outcome_probability, outcome_probability_matrix, outcome_table, random_povm, random_state, tsirelson_povms
from .replication import POSITIVE_TOL, replication_choice

logger = logging.getLogger(__name__)

FORMULA_TOL = 1e-10
SUM_TOL = 1e-9
MAX_ELEMENTS = 4


@dataclass(frozen=True)
class SuiteCheck:
    name: str
    instances: int
    failures: int
    worst: float

    @property
    def passed(self) -> bool:
        return self.failures == 0


def _random_pair(rng: np.random.Generator) -> tuple[Povm, Povm, SharedState]:
    sizes = rng.integers(2, MAX_ELEMENTS + 1, size=2)
    return random_povm(rng, int(sizes[0])), random_povm(rng, int(sizes[1])), random_state(rng)


def run_povm_suite(instances: int, rng: SeedLike = None) -> list[SuiteCheck]:
    """
    For each random instance: formula against direct matrix evaluation,
    total probability over all outcome pairs, and positivity of the
    classically replicated outcome pair. Ends with a check that the
    Tsirelson measurements reproduce the Tsirelson box.
    """
    formula_worst = sum_worst = 0.0
    formula_failures = sum_failures = replication_failures = 0
    replication_worst = np.inf

    for child in spawn(rng, instances):
        povm_1, povm_2, state = _random_pair(child)
        i = int(child.integers(len(povm_1)))
        j = int(child.integers(len(povm_2)))
        gap = abs(
            outcome_probability(state, povm_1[i], povm_2[j])
            - outcome_probability_matrix(state, povm_1[i], povm_2[j])
        )
        formula_worst = max(formula_worst, gap)
        formula_failures += gap > FORMULA_TOL

        total_gap = abs(outcome_table(state, povm_1, povm_2).sum() - 1.0)
        sum_worst = max(sum_worst, total_gap)
        sum_failures += total_gap > SUM_TOL

        # Reuse one POVM per sender for both message bits.
        choice = replication_choice(0, 0, {0: povm_1}, {0: povm_2}, state)
        replication_worst = min(replication_worst, choice.probability)
        replication_failures += not choice.probability > POSITIVE_TOL

    alice, bob, shared = tsirelson_povms()
    target = tsirelson_box().pmf
    tsirelson_gap = max(
        float(np.max(np.abs(outcome_table(shared, alice[x], bob[y]) - target[x, y])))
        for x in (0, 1)
        for y in (0, 1)
    )

    checks = [
        SuiteCheck('formula-vs-matrix', instances, formula_failures, formula_worst),
        SuiteCheck('probabilities-sum-to-one', instances, sum_failures, sum_worst),
        SuiteCheck('replication-positive', instances, replication_failures, float(replication_worst if instances else 0.0)),
        SuiteCheck('tsirelson-statistics', 1, int(tsirelson_gap > FORMULA_TOL), tsirelson_gap),
    ]
    for check in checks:
        logger.debug(f'{check.name}: {check.failures} failures in {check.instances} (worst {check.worst:.3g})')
    return checks
