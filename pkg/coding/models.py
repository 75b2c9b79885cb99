"""
Coding strategies and the statistics gathered by Monte Carlo trials.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import numpy.typing as npt
from django.db import models

from boxes.models import CorrelationBox
from core.exceptions import InvalidStrategyError
from interference.models import ProductDistribution


class StrategyKind(models.TextChoices):
    BOX_ASSISTED = 'box-assisted', 'Box-assisted'
    ONE_BIT_COMM = 'one-bit-comm', 'One bit of sender communication'
    FIXED_DISTRIBUTION = 'fixed-distribution', 'Fixed product input distribution'


class Decoder(models.TextChoices):
    """How a receiver treats the erasure symbol."""
    IDENTITY = 'identity', 'Identity (guess a bit on erasure)'
    ERASURE_AWARE = 'erasure-aware', 'Erasure-aware (report erasure)'


class MessageSource(models.TextChoices):
    UNIFORM = 'uniform-random', 'I.i.d. uniform message bits'
    EXHAUSTIVE = 'exhaustive-cycle', 'Cycle through every message pair'


class RateModel(models.TextChoices):
    AUTO = 'auto', 'Pick per strategy'
    ERASURE_CHANNEL = 'erasure-channel', 'Binary erasure channel accounting'
    PLUG_IN_MI = 'plug-in-mi', 'Plug-in mutual information'


class Resource(models.TextChoices):
    """Resource shared by the senders in a coding experiment."""
    CLASSICAL = 'classical', 'Deterministic local strategy'
    QUANTUM = 'quantum', 'Tsirelson-optimal correlations'
    PR = 'pr', 'PR-box'
    ONE_BIT_COMM = 'one-bit-comm', 'One bit of communication'


@dataclass(frozen=True, eq=False)
class Strategy:
    """
    How the senders turn message bits into channel inputs and how the
    receivers read them back.

    Box-assisted and one-bit strategies send the two-bit input
    (message bit, correlation bit). Fixed-distribution strategies draw
    inputs from `distribution` directly and carry no message bit.
    """
    kind: str
    label: str
    box: Optional[CorrelationBox] = None
    distribution: Optional[ProductDistribution] = None
    decoder: str = Decoder.ERASURE_AWARE

    def __post_init__(self) -> None:
        if self.kind not in StrategyKind.values:
            raise InvalidStrategyError(f"Unknown strategy kind '{self.kind}'")
        if self.decoder not in Decoder.values:
            raise InvalidStrategyError(f"Unknown decoder '{self.decoder}'")
        if (self.kind == StrategyKind.BOX_ASSISTED) != (self.box is not None):
            raise InvalidStrategyError('A box is required exactly for box-assisted strategies')
        if (self.kind == StrategyKind.FIXED_DISTRIBUTION) != (self.distribution is not None):
            raise InvalidStrategyError('A distribution is required exactly for fixed-distribution strategies')

    @property
    def carries_messages(self) -> bool:
        return self.kind != StrategyKind.FIXED_DISTRIBUTION


@dataclass
class TrialStats:
    """
    Counts from `n` channel uses.

    `joint_1` / `joint_2` count (message, received symbol) pairs per
    receiver; the erasure symbol, when the channel has one, is the last
    column. For fixed-distribution strategies the message is the input
    symbol itself and errors are not tracked.
    """
    n: int
    errors_1: int = 0
    errors_2: int = 0
    erasures_1: int = 0
    erasures_2: int = 0
    joint_1: npt.NDArray[np.int64] = field(default_factory=lambda: np.zeros((2, 2), dtype=np.int64))
    joint_2: npt.NDArray[np.int64] = field(default_factory=lambda: np.zeros((2, 2), dtype=np.int64))
    carries_messages: bool = True
    transcript: Optional[list[tuple[str, ...]]] = None

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InvalidStrategyError('Trial count must be non-negative')
        for errors, erasures in ((self.errors_1, self.erasures_1), (self.errors_2, self.erasures_2)):
            if errors < 0 or erasures < 0 or errors + erasures > self.n:
                raise InvalidStrategyError('Error and erasure counts exceed the trial count')

    def errors(self, pair: int) -> int:
        return self.errors_1 if pair == 1 else self.errors_2

    def erasures(self, pair: int) -> int:
        return self.erasures_1 if pair == 1 else self.erasures_2

    def joint(self, pair: int) -> npt.NDArray[np.int64]:
        return self.joint_1 if pair == 1 else self.joint_2

    def erasure_fraction(self, pair: int) -> float:
        return self.erasures(pair) / self.n if self.n else 0.0

    def error_fraction(self, pair: int) -> float:
        return self.errors(pair) / self.n if self.n else 0.0


def merge_stats(first: TrialStats, second: TrialStats) -> TrialStats:
    """Sum the counts of two runs of the same experiment."""
    if first.joint_1.shape != second.joint_1.shape or first.joint_2.shape != second.joint_2.shape:
        raise InvalidStrategyError('Cannot merge stats from different channel alphabets')
    if first.carries_messages != second.carries_messages:
        raise InvalidStrategyError('Cannot merge stats from different strategy kinds')

    transcript = None
    if first.transcript is not None and second.transcript is not None:
        transcript = first.transcript + second.transcript

    return TrialStats(
        n=first.n + second.n,
        errors_1=first.errors_1 + second.errors_1,
        errors_2=first.errors_2 + second.errors_2,
        erasures_1=first.erasures_1 + second.erasures_1,
        erasures_2=first.erasures_2 + second.erasures_2,
        joint_1=first.joint_1 + second.joint_1,
        joint_2=first.joint_2 + second.joint_2,
        carries_messages=first.carries_messages,
        transcript=transcript,
    )
