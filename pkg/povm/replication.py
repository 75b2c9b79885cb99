"""
Classical replication of entanglement-assisted strategies on Channel I.

A strategy is a table of joint outcome probabilities P(i, j | m1, m2)
plus encoders mapping (message bit, outcome) to an input symbol. It is a
perfect code when each message pair reaches exactly one Channel I output
and different message pairs reach different outputs. Picking, for each
message, one outcome of positive probability turns any perfect
entangled strategy into a perfect classical one; hemisphere selection
makes that pick local to each sender.
"""
import itertools
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Optional

import numpy as np
import numpy.typing as npt

from boxes.models import CorrelationBox, DeterministicStrategy
from core.exceptions import HemisphereEmptyError, InvalidStrategyError
from interference.channels import channel_one_output

from .models import TWO_PI, Hemisphere, Povm, SharedState
from .operators import outcome_probability, outcome_table

logger = logging.getLogger(__name__)

POSITIVE_TOL = 1e-12
MESSAGE_PAIRS = tuple(itertools.product((0, 1), repeat=2))

Encoder = Mapping[int, Sequence[int]]


def _in_hemisphere(phi: float, hemisphere: str) -> bool:
    if hemisphere == Hemisphere.EAST:
        return 0.0 <= phi < np.pi
    return np.pi <= phi < TWO_PI


def hemisphere_select(povm: Povm, hemisphere: str) -> int:
    """
    Index of the first element whose azimuth lies in `hemisphere`,
    preferring elements off the poles.
    """
    if hemisphere not in Hemisphere.values:
        raise InvalidStrategyError(f"Unknown hemisphere '{hemisphere}'")
    candidates = [k for k, e in enumerate(povm) if e.gamma > 0 and _in_hemisphere(e.angles.phi, hemisphere)]
    if not candidates:
        raise HemisphereEmptyError(f'No POVM element in the {hemisphere} hemisphere')
    off_pole = [k for k in candidates if not povm[k].angles.is_polar]
    return (off_pole or candidates)[0]


@dataclass(frozen=True)
class ReplicationChoice:
    i: int
    j: int
    probability: float
    fallback: bool


def replication_choice(
    m1: int,
    m2: int,
    povms_1: Mapping[int, Povm],
    povms_2: Mapping[int, Povm],
    state: SharedState,
) -> ReplicationChoice:
    """
    Sender 1 takes an eastern element, Sender 2 a western one. If a
    hemisphere is empty or the pair has zero probability, the first
    (i, j) of positive probability is taken instead; one always exists
    because the probabilities sum to 1.
    """
    povm_1, povm_2 = povms_1[m1], povms_2[m2]
    try:
        i = hemisphere_select(povm_1, Hemisphere.EAST)
        j = hemisphere_select(povm_2, Hemisphere.WEST)
        probability = outcome_probability(state, povm_1[i], povm_2[j])
        if probability > POSITIVE_TOL:
            return ReplicationChoice(i, j, probability, fallback=False)
        logger.debug(f'Hemisphere pair ({i}, {j}) has zero probability for messages ({m1}, {m2})')
    except HemisphereEmptyError as exc:
        logger.debug(f'{exc} for messages ({m1}, {m2})')

    for i, j in itertools.product(range(len(povm_1)), range(len(povm_2))):
        probability = outcome_probability(state, povm_1[i], povm_2[j])
        if probability > POSITIVE_TOL:
            return ReplicationChoice(i, j, probability, fallback=True)
    raise InvalidStrategyError('No outcome pair has positive probability')


def classical_replication(
    m1: int,
    m2: int,
    povms_1: Mapping[int, Povm],
    povms_2: Mapping[int, Povm],
    state: SharedState,
) -> tuple[int, int]:
    choice = replication_choice(m1, m2, povms_1, povms_2, state)
    return choice.i, choice.j


@dataclass(frozen=True, eq=False)
class CandidateStrategy:
    """
    `outcomes[(m1, m2)]` is the table P(i, j | m1, m2); `encoder_1[m1][i]`
    and `encoder_2[m2][j]` are the input symbols (0..3) the senders send.
    """
    outcomes: Mapping[tuple[int, int], npt.NDArray[np.float64]]
    encoder_1: Encoder
    encoder_2: Encoder
    label: str = 'candidate'

    def __post_init__(self) -> None:
        if set(self.outcomes) != set(MESSAGE_PAIRS):
            raise InvalidStrategyError('Outcome tables are needed for all four message pairs')
        for (m1, m2), table in self.outcomes.items():
            table = np.asarray(table, dtype=np.float64)
            if table.ndim != 2 or np.any(table < -POSITIVE_TOL) or abs(table.sum() - 1.0) > 1e-9:
                raise InvalidStrategyError(f'Outcome table for ({m1}, {m2}) is not a distribution')
            for encoder, m, size in ((self.encoder_1, m1, table.shape[0]), (self.encoder_2, m2, table.shape[1])):
                symbols = encoder.get(m)
                if symbols is None or len(symbols) != size:
                    raise InvalidStrategyError(f'Encoder for message {m} does not cover {size} outcomes')
                if any(s not in range(4) for s in symbols):
                    raise InvalidStrategyError('Encoders must map to input symbols 0..3')

    @classmethod
    def from_box(cls, box: CorrelationBox) -> 'CandidateStrategy':
        """Box outputs as outcomes; each sender sends (message bit, box output)."""
        outcomes = {(m1, m2): np.array(box.pmf[m1, m2]) for m1, m2 in MESSAGE_PAIRS}
        encoder = {m: (2 * m, 2 * m + 1) for m in (0, 1)}
        return cls(outcomes, encoder, encoder, label=box.label)

    @classmethod
    def from_povms(
        cls,
        povms_1: Mapping[int, Povm],
        povms_2: Mapping[int, Povm],
        state: SharedState,
        encoder_1: Optional[Encoder] = None,
        encoder_2: Optional[Encoder] = None,
        label: str = 'povm',
    ) -> 'CandidateStrategy':
        """Outcomes of measuring `state`; two-outcome POVMs default to sending (message bit, outcome)."""
        default = {m: (2 * m, 2 * m + 1) for m in (0, 1)}
        outcomes = {(m1, m2): outcome_table(state, povms_1[m1], povms_2[m2]) for m1, m2 in MESSAGE_PAIRS}
        return cls(outcomes, encoder_1 or default, encoder_2 or default, label=label)

    @classmethod
    def from_deterministic(cls, strategy: DeterministicStrategy) -> 'CandidateStrategy':
        """Single-outcome measurements: the senders always append fa(m1) and fb(m2)."""
        outcomes = {pair: np.ones((1, 1)) for pair in MESSAGE_PAIRS}
        encoder_1 = {m: (2 * m + strategy.fa[m],) for m in (0, 1)}
        encoder_2 = {m: (2 * m + strategy.fb[m],) for m in (0, 1)}
        return cls(outcomes, encoder_1, encoder_2, label=f'deterministic[{strategy}]')

    def reachable_outputs(self, m1: int, m2: int) -> set[tuple[int, int]]:
        """Channel I outputs reached with positive probability from messages (m1, m2)."""
        table = np.asarray(self.outcomes[(m1, m2)])
        return {
            channel_one_output(self.encoder_1[m1][i], self.encoder_2[m2][j])
            for i, j in zip(*np.nonzero(table > POSITIVE_TOL))
        }


def perfect_quantum_impossible_check(strategy: CandidateStrategy) -> bool:
    """
    True iff `strategy` is a perfect code on Channel I: every message
    pair lands in a single output row, and the rows are distinct across
    message pairs.
    """
    rows = []
    for m1, m2 in MESSAGE_PAIRS:
        reached = strategy.reachable_outputs(m1, m2)
        if len(reached) != 1:
            logger.debug(f'{strategy.label}: messages ({m1}, {m2}) reach {len(reached)} outputs')
            return False
        rows.append(reached.pop())
    return len(set(rows)) == len(rows)


def replicate_classically(
    povms_1: Mapping[int, Povm],
    povms_2: Mapping[int, Povm],
    state: SharedState,
    encoder_1: Optional[Encoder] = None,
    encoder_2: Optional[Encoder] = None,
) -> tuple[CandidateStrategy, bool]:
    """
    Replace the measurements by one positive-probability outcome per
    message pair. The flag is True when every pick came from hemisphere
    selection, i.e. each sender's pick depends only on its own message.
    """
    default = {m: (2 * m, 2 * m + 1) for m in (0, 1)}
    encoder_1 = encoder_1 or default
    encoder_2 = encoder_2 or default

    outcomes = {}
    local = True
    for m1, m2 in MESSAGE_PAIRS:
        choice = replication_choice(m1, m2, povms_1, povms_2, state)
        table = np.zeros((len(povms_1[m1]), len(povms_2[m2])))
        table[choice.i, choice.j] = 1.0
        outcomes[(m1, m2)] = table
        local = local and not choice.fallback
    return CandidateStrategy(outcomes, encoder_1, encoder_2, label='classical-replica'), local
