"""
Bipartite correlation resources P(a, b | x, y) on bits.
"""
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from core.exceptions import InvalidBoxError
from core.utils import STOCHASTIC_TOL


@dataclass(frozen=True, eq=False)
class CorrelationBox:
    """
    Conditional distribution indexed pmf[x, y, a, b].

    Every (x, y) column must be a distribution. Non-signaling is not
    enforced here so that signaling tables can be represented and
    rejected by `is_nonsignaling`; every library constructor produces
    non-signaling boxes.
    """
    pmf: npt.NDArray[np.float64] = field(repr=False)
    label: str = 'box'

    def __post_init__(self) -> None:
        table = np.array(self.pmf, dtype=np.float64)
        if table.shape != (2, 2, 2, 2):
            raise InvalidBoxError(f'Box table must have shape (2, 2, 2, 2), got {table.shape}')
        if np.any(~np.isfinite(table)) or np.any(table < 0):
            raise InvalidBoxError('Box table has negative or non-finite entries')
        deviation = np.abs(table.sum(axis=(2, 3)) - 1.0)
        if np.any(deviation > STOCHASTIC_TOL):
            raise InvalidBoxError(f'Box {self.label!r} columns do not sum to 1')

        table.setflags(write=False)
        object.__setattr__(self, 'pmf', table)


@dataclass(frozen=True)
class DeterministicStrategy:
    """Local response functions: Alice answers fa[x], Bob answers fb[y]."""
    fa: tuple[int, int]
    fb: tuple[int, int]

    def __post_init__(self) -> None:
        for name, table in (('fa', self.fa), ('fb', self.fb)):
            if len(table) != 2 or any(bit not in (0, 1) for bit in table):
                raise InvalidBoxError(f'{name} must map both inputs to a bit, got {table}')

    def __str__(self) -> str:
        return f'fa={self.fa[0]}{self.fa[1]} fb={self.fb[0]}{self.fb[1]}'
