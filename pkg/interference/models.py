"""
Data model for two-sender, two-receiver channels: symbols, channel
tables, product input distributions and rate reports.
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np
import numpy.typing as npt
from django.db import models

from core.exceptions import InvalidDistributionError
from core.utils import STOCHASTIC_TOL, as_probability_vector

ERASURE_LABEL = 'E'


class LogBase(models.TextChoices):
    """Units for every entropy and rate."""
    BITS = 'bits', 'Bits (base 2)'
    NATS = 'nats', 'Nats (base e)'


class Pair(models.IntegerChoices):
    FIRST = 1, 'Sender 1 -> Receiver 1'
    SECOND = 2, 'Sender 2 -> Receiver 2'


def input_bits(symbol: int) -> tuple[int, int]:
    """Split a two-bit input index into (first bit, second bit)."""
    if not 0 <= symbol <= 3:
        raise InvalidDistributionError(f'Input symbol {symbol} outside 0..3')
    return symbol >> 1, symbol & 1


def input_symbol(first: int, second: int) -> int:
    """Concatenate two bits into an input index: 00 -> 0 ... 11 -> 3."""
    return ((first & 1) << 1) | (second & 1)


def input_label(symbol: int) -> str:
    first, second = input_bits(symbol)
    return f'{first}{second}'


@dataclass(frozen=True, eq=False)
class ChannelSpec:
    """
    Finite conditional distribution p(y1, y2 | x1, x2).

    `pmf` has shape (|X1|, |X2|, |Y1|, |Y2|). When `erasure` is set the
    last output symbol of each receiver is the erasure mark E.
    """
    name: str
    pmf: npt.NDArray[np.float64] = field(repr=False)
    epsilon: Optional[float] = None
    erasure: bool = False

    def __post_init__(self) -> None:
        table = np.array(self.pmf, dtype=np.float64)
        if table.ndim != 4 or min(table.shape) < 2:
            raise InvalidDistributionError(
                f'Channel table must be 4-D with every alphabet of size >= 2, got {table.shape}'
            )
        if np.any(~np.isfinite(table)) or np.any(table < 0):
            raise InvalidDistributionError('Channel table has negative or non-finite entries')

        row_sums = table.sum(axis=(2, 3))
        worst = float(np.max(np.abs(row_sums - 1.0)))
        if worst > STOCHASTIC_TOL:
            raise InvalidDistributionError(
                f'Channel {self.name!r} is not row-stochastic (max deviation {worst:.3g})'
            )
        if self.epsilon is not None and not 0.0 <= self.epsilon <= 1.0:
            raise InvalidDistributionError(f'epsilon={self.epsilon} outside [0, 1]')
        if not self.name or any(ch.isspace() for ch in self.name):
            raise InvalidDistributionError('Channel name must be non-empty without whitespace')

        table.setflags(write=False)
        object.__setattr__(self, 'pmf', table)

    @property
    def input_alphabet_sizes(self) -> tuple[int, int]:
        return self.pmf.shape[0], self.pmf.shape[1]

    @property
    def output_alphabet_sizes(self) -> tuple[int, int]:
        return self.pmf.shape[2], self.pmf.shape[3]

    def output_labels(self, pair: int) -> tuple[str, ...]:
        size = self.output_alphabet_sizes[pair - 1]
        if self.erasure:
            return tuple(str(k) for k in range(size - 1)) + (ERASURE_LABEL,)
        return tuple(str(k) for k in range(size))

    @cached_property
    def _kernels(self) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
        first = self.pmf.sum(axis=3)
        second = self.pmf.sum(axis=2).transpose(1, 0, 2)
        return first, second

    def pair_kernel(self, pair: int) -> npt.NDArray[np.float64]:
        """
        Marginal kernel of one pair, indexed (own input, other input, own output).
        """
        if pair not in (Pair.FIRST, Pair.SECOND):
            raise InvalidDistributionError(f'pair must be 1 or 2, got {pair}')
        return self._kernels[pair - 1]


@dataclass(frozen=True, eq=False)
class ProductDistribution:
    """Independent input distributions of the two senders."""
    d1: npt.NDArray[np.float64]
    d2: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        object.__setattr__(self, 'd1', as_probability_vector(self.d1, name='d1'))
        object.__setattr__(self, 'd2', as_probability_vector(self.d2, name='d2'))

    @classmethod
    def uniform(cls, n1: int = 4, n2: int = 4) -> 'ProductDistribution':
        return cls(np.full(n1, 1.0 / n1), np.full(n2, 1.0 / n2))

    def other(self, pair: int) -> npt.NDArray[np.float64]:
        return self.d2 if pair == Pair.FIRST else self.d1

    def own(self, pair: int) -> npt.NDArray[np.float64]:
        return self.d1 if pair == Pair.FIRST else self.d2


@dataclass(frozen=True)
class RateReport:
    """Per-pair rates and their sum, in `log_base` units."""
    r1: float
    r2: float
    log_base: str = LogBase.BITS
    sum_stderr: Optional[float] = None

    def __post_init__(self) -> None:
        if self.log_base not in LogBase.values:
            raise InvalidDistributionError(f"Unknown log base '{self.log_base}'")
        # Mutual informations can come out as -1e-17 from cancellation.
        object.__setattr__(self, 'r1', max(0.0, float(self.r1)))
        object.__setattr__(self, 'r2', max(0.0, float(self.r2)))

    @property
    def sum_rate(self) -> float:
        return self.r1 + self.r2
