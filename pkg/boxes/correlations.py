"""
Constructors and CHSH-game evaluation for correlation boxes.

CHSH expectations map outcome bits 0 -> +1 and 1 -> -1, so the product
of both outcomes is (-1)^(a XOR b) and

    S = |E(0,0) + E(0,1) + E(1,0) - E(1,1)|.
"""
import itertools
import math
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from core.exceptions import InvalidBoxError
from core.rng import SeedLike, make_rng

from .models import CorrelationBox, DeterministicStrategy

NONSIGNALING_TOL = 1e-12
TSIRELSON_WIN = math.cos(math.pi / 8) ** 2

_BITS = (0, 1)


def _wins(x: int, y: int, a: int, b: int) -> bool:
    return (a ^ b) == (x & y)


def _table_from_win_probability(win: float) -> npt.NDArray[np.float64]:
    table = np.empty((2, 2, 2, 2))
    for x, y, a, b in itertools.product(_BITS, repeat=4):
        table[x, y, a, b] = win / 2 if _wins(x, y, a, b) else (1.0 - win) / 2
    return table


def pr_box() -> CorrelationBox:
    return CorrelationBox(_table_from_win_probability(1.0), label='pr')


def tsirelson_box() -> CorrelationBox:
    """Quantum-optimal CHSH statistics: win with probability cos^2(pi/8) on every question pair."""
    return CorrelationBox(_table_from_win_probability(TSIRELSON_WIN), label='tsirelson')


def uniform_box() -> CorrelationBox:
    return CorrelationBox(np.full((2, 2, 2, 2), 0.25), label='uniform')


def deterministic_box(strategy: DeterministicStrategy) -> CorrelationBox:
    table = np.zeros((2, 2, 2, 2))
    for x, y in itertools.product(_BITS, repeat=2):
        table[x, y, strategy.fa[x], strategy.fb[y]] = 1.0
    return CorrelationBox(table, label=f'deterministic[{strategy}]')


def all_deterministic_strategies() -> list[DeterministicStrategy]:
    """The 16 pairs of local response functions on one bit."""
    functions = list(itertools.product(_BITS, repeat=2))
    return [DeterministicStrategy(fa, fb) for fa in functions for fb in functions]


def mix_boxes(boxes: Sequence[CorrelationBox], weights: npt.ArrayLike, label: str = 'mixture') -> CorrelationBox:
    """Convex combination of box tables."""
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (len(boxes),) or np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise InvalidBoxError('Mixture weights must be a probability vector, one per box')
    table = np.einsum('k,kxyab->xyab', w, np.stack([box.pmf for box in boxes]))
    return CorrelationBox(table, label=label)


def shared_randomness_box(weights: npt.ArrayLike) -> CorrelationBox:
    """Classical box: shared randomness selecting one of the 16 deterministic strategies."""
    boxes = [deterministic_box(strategy) for strategy in all_deterministic_strategies()]
    return mix_boxes(boxes, weights, label='shared-randomness')


def chsh_win_probability(box: CorrelationBox) -> float:
    total = 0.0
    for x, y, a, b in itertools.product(_BITS, repeat=4):
        if _wins(x, y, a, b):
            total += box.pmf[x, y, a, b]
    return total / 4


def correlator(box: CorrelationBox, x: int, y: int) -> float:
    """E(x, y) = P(a = b | x, y) - P(a != b | x, y)."""
    column = box.pmf[x, y]
    return float(column[0, 0] + column[1, 1] - column[0, 1] - column[1, 0])


def chsh_value(box: CorrelationBox) -> float:
    return abs(
        correlator(box, 0, 0) + correlator(box, 0, 1) + correlator(box, 1, 0) - correlator(box, 1, 1)
    )


def best_deterministic_win() -> tuple[float, DeterministicStrategy]:
    """Brute-force maximum CHSH win probability over local deterministic strategies."""
    scored = [
        (chsh_win_probability(deterministic_box(strategy)), strategy)
        for strategy in all_deterministic_strategies()
    ]
    return max(scored, key=lambda item: item[0])


def is_nonsignaling(box: CorrelationBox, tol: float = NONSIGNALING_TOL) -> bool:
    alice = box.pmf.sum(axis=3)  # P(a | x, y), indexed [x, y, a]
    bob = box.pmf.sum(axis=2)  # P(b | x, y), indexed [x, y, b]
    alice_ok = np.all(np.abs(alice[:, 0, :] - alice[:, 1, :]) <= tol)
    bob_ok = np.all(np.abs(bob[0, :, :] - bob[1, :, :]) <= tol)
    return bool(alice_ok and bob_ok)


def sample_boxes(
    box: CorrelationBox,
    x: npt.ArrayLike,
    y: npt.ArrayLike,
    rng: SeedLike = None,
) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.int64]]:
    """Vectorized box use: one (a, b) per question pair (x[k], y[k])."""
    questions_x = np.asarray(x, dtype=np.int64)
    questions_y = np.asarray(y, dtype=np.int64)
    if np.any((questions_x & ~1) != 0) or np.any((questions_y & ~1) != 0):
        raise InvalidBoxError('Box inputs must be bits')

    cdf = np.cumsum(box.pmf.reshape(2, 2, 4), axis=-1)
    cdf = cdf / cdf[..., -1:]
    draws = make_rng(rng).random(questions_x.shape)
    outcome = np.sum(cdf[questions_x, questions_y] <= draws[..., None], axis=-1)
    return outcome >> 1, outcome & 1


def sample_box(box: CorrelationBox, x: int, y: int, rng: SeedLike = None) -> tuple[int, int]:
    a, b = sample_boxes(box, np.array([x]), np.array([y]), rng)
    return int(a[0]), int(b[0])


def estimate_win_probability(box: CorrelationBox, n: int, rng: SeedLike = None) -> float:
    """Monte Carlo CHSH win rate with uniformly random questions."""
    generator = make_rng(rng)
    x = generator.integers(0, 2, size=n)
    y = generator.integers(0, 2, size=n)
    a, b = sample_boxes(box, x, y, generator)
    return float(np.mean((a ^ b) == (x & y)))


def box_table(box: CorrelationBox) -> str:
    """Four-column probability table: one row per question pair, columns ab = 00, 01, 10, 11."""
    lines = [f'{box.label}', ' x y |   P(00)    P(01)    P(10)    P(11)']
    for x, y in itertools.product(_BITS, repeat=2):
        cells = '  '.join(f'{p:7.4f}' for p in box.pmf[x, y].ravel())
        lines.append(f' {x} {y} | {cells}')
    return '\n'.join(lines)
