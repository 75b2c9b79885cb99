"""
Channel constructors and sampling.

Channel I maps each input pair to one output pair deterministically.
Channel II keeps Channel I's output on the eight PR-encoded cells with
probability epsilon (erasing both outputs otherwise) and erases every
other cell.
"""
from typing import Optional

import numpy as np
import numpy.typing as npt

from core.exceptions import InvalidDistributionError
from core.rng import SeedLike, make_rng

from .models import ChannelSpec, ProductDistribution

CHANNEL_ONE = 'channel-one'
CHANNEL_TWO = 'channel-two'

# Rows are X1 = 00, 01, 10, 11; columns are X2 in the same order; each
# entry is the output pair Y1Y2.
CHANNEL_ONE_TABLE = (
    ('00', '11', '01', '10'),
    ('11', '00', '10', '01'),
    ('10', '01', '00', '11'),
    ('01', '10', '11', '00'),
)

# Cells of Channel II that deliver Channel I's output with probability epsilon.
CHANNEL_TWO_LIVE_CELLS = frozenset({
    (0, 0), (0, 2),
    (1, 1), (1, 3),
    (2, 0), (2, 3),
    (3, 1), (3, 2),
})

ERASED = 2


def channel_one_output(x1: int, x2: int) -> tuple[int, int]:
    """Output pair (y1, y2) of Channel I for inputs x1, x2 in 0..3."""
    cell = CHANNEL_ONE_TABLE[x1][x2]
    return int(cell[0]), int(cell[1])


def build_channel(
    name: str,
    pmf: npt.ArrayLike,
    *,
    epsilon: Optional[float] = None,
    erasure: bool = False,
) -> ChannelSpec:
    """Validate an arbitrary two-pair channel table."""
    return ChannelSpec(name=name, pmf=np.asarray(pmf, dtype=np.float64), epsilon=epsilon, erasure=erasure)


def build_channel_one() -> ChannelSpec:
    pmf = np.zeros((4, 4, 2, 2))
    for x1 in range(4):
        for x2 in range(4):
            y1, y2 = channel_one_output(x1, x2)
            pmf[x1, x2, y1, y2] = 1.0
    return build_channel(CHANNEL_ONE, pmf)


def build_channel_two(epsilon: float) -> ChannelSpec:
    if not 0.0 <= epsilon <= 1.0:
        raise InvalidDistributionError(f'epsilon={epsilon} outside [0, 1]')

    pmf = np.zeros((4, 4, 3, 3))
    for x1 in range(4):
        for x2 in range(4):
            if (x1, x2) in CHANNEL_TWO_LIVE_CELLS:
                y1, y2 = channel_one_output(x1, x2)
                pmf[x1, x2, y1, y2] += epsilon
                pmf[x1, x2, ERASED, ERASED] += 1.0 - epsilon
            else:
                pmf[x1, x2, ERASED, ERASED] = 1.0
    return build_channel(CHANNEL_TWO, pmf, epsilon=epsilon, erasure=True)


def _cumulative_tables(spec: ChannelSpec) -> npt.NDArray[np.float64]:
    nx1, nx2 = spec.input_alphabet_sizes
    flat = spec.pmf.reshape(nx1, nx2, -1)
    cdf = np.cumsum(flat, axis=-1)
    # Dividing by the last entry makes it exactly 1.0.
    return cdf / cdf[..., -1:]


def sample_outputs(
    spec: ChannelSpec,
    x1: npt.ArrayLike,
    x2: npt.ArrayLike,
    rng: SeedLike = None,
) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.int64]]:
    """Vectorized channel use: one output pair per (x1[k], x2[k])."""
    inputs_1 = np.asarray(x1, dtype=np.int64)
    inputs_2 = np.asarray(x2, dtype=np.int64)
    nx1, nx2 = spec.input_alphabet_sizes
    if np.any((inputs_1 < 0) | (inputs_1 >= nx1)) or np.any((inputs_2 < 0) | (inputs_2 >= nx2)):
        raise InvalidDistributionError('Input symbol outside the channel alphabet')

    generator = make_rng(rng)
    cdf = _cumulative_tables(spec)[inputs_1, inputs_2]
    draws = generator.random(inputs_1.shape)
    flat_index = np.sum(cdf <= draws[..., None], axis=-1)
    ny2 = spec.output_alphabet_sizes[1]
    return flat_index // ny2, flat_index % ny2


def sample_output(spec: ChannelSpec, x1: int, x2: int, rng: SeedLike = None) -> tuple[int, int]:
    y1, y2 = sample_outputs(spec, np.array([x1]), np.array([x2]), rng)
    return int(y1[0]), int(y2[0])


def pair_marginal(spec: ChannelSpec, dist: ProductDistribution, pair: int) -> npt.NDArray[np.float64]:
    """
    Conditional pmf p(y_i | x_i) seen by one pair once the other sender's
    input is averaged out under `dist`.
    """
    kernel = spec.pair_kernel(pair)
    other = dist.other(pair)
    if other.shape[0] != kernel.shape[1] or dist.own(pair).shape[0] != kernel.shape[0]:
        raise InvalidDistributionError('Distribution size does not match the channel alphabets')
    return np.einsum('j,ijk->ik', other, kernel)


def channel_by_name(name: str, epsilon: Optional[float] = None) -> ChannelSpec:
    """Resolve the command-line channel names 'one' and 'two'."""
    if name in ('one', CHANNEL_ONE):
        return build_channel_one()
    if name in ('two', CHANNEL_TWO):
        if epsilon is None:
            raise InvalidDistributionError('Channel II needs epsilon')
        return build_channel_two(epsilon)
    raise InvalidDistributionError(f"Unknown channel '{name}'")

