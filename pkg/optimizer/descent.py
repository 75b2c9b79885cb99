"""
Projected gradient descent on a product of two unit spheres, with a
geodesic line search and seeded multi-restart.
"""
import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from core.exceptions import ConfigurationError
from core.rng import SeedLike, make_rng, spawn
from interference.information import joint_rate
from interference.models import ChannelSpec, LogBase, ProductDistribution

from .models import AmplitudeVector, OptimizerConfig, OptResult, StepWeights, as_amplitudes
from .sphere import (
    batched_objective,
    geodesic_batch,
    geodesic_step,
    gradient,
    objective,
    random_start,
    random_tangent,
    tangent_project,
)

logger = logging.getLogger(__name__)

ZERO_GRADIENT = 1e-12
SADDLE_STEP = 1e-3
REFINE_PRECISION = 1e-3


@dataclass
class _Leg:
    x1: AmplitudeVector
    x2: AmplitudeVector
    value: float
    iterations: int
    converged: bool
    history: list[float]
    stationary: bool = False


def _line_search(
    spec: ChannelSpec,
    x1: AmplitudeVector,
    x2: AmplitudeVector,
    directions: tuple[np.ndarray, np.ndarray],
    weights: tuple[float, float],
    config: OptimizerConfig,
    log_base: str,
) -> tuple[float, float]:
    """
    Minimize f along the paired great circles over phi in [0, pi]:
    a batched grid scan followed by bounded refinement around the best
    grid point. Returns (phi, f(phi)).
    """
    n1, n2 = directions
    w1, w2 = weights

    def along(phis: np.ndarray) -> np.ndarray:
        return batched_objective(
            spec, geodesic_batch(x1, n1, w1 * phis), geodesic_batch(x2, n2, w2 * phis), log_base
        )

    grid = np.linspace(0.0, math.pi, config.line_search_grid + 1)
    values = along(grid)
    best = int(np.argmin(values))
    phi, value = float(grid[best]), float(values[best])

    if config.refine_iters > 0:
        lower = grid[max(best - 1, 0)]
        upper = grid[min(best + 1, config.line_search_grid)]
        refined = minimize_scalar(
            lambda t: float(along(np.array([t]))[0]),
            bounds=(lower, upper),
            method='bounded',
            # Angle precision well below the dx stopping tolerance.
            options={'maxiter': config.refine_iters, 'xatol': REFINE_PRECISION * config.tol},
        )
        if refined.fun < value:
            phi, value = float(refined.x), float(refined.fun)
    return phi, value


def _step_weights(norm1: float, norm2: float, mode: str) -> tuple[float, float]:
    if mode == StepWeights.EQUAL:
        return float(norm1 > ZERO_GRADIENT), float(norm2 > ZERO_GRADIENT)
    total = norm1**2 + norm2**2
    return norm1**2 / total, norm2**2 / total


def _descend_leg(
    spec: ChannelSpec,
    x1: AmplitudeVector,
    x2: AmplitudeVector,
    config: OptimizerConfig,
    log_base: str,
    budget: int,
) -> _Leg:
    value = objective(x1, x2, spec, log_base)
    history = [value]

    for iteration in range(1, budget + 1):
        g1, g2 = gradient(x1, x2, spec, log_base)
        h1, h2 = tangent_project(g1, x1), tangent_project(g2, x2)
        norm1, norm2 = float(np.linalg.norm(h1)), float(np.linalg.norm(h2))
        if math.hypot(norm1, norm2) < ZERO_GRADIENT:
            return _Leg(x1, x2, value, iteration - 1, True, history, stationary=True)

        # Unit descent tangents; a sphere with vanishing gradient stays put.
        n1 = -h1 / norm1 if norm1 > ZERO_GRADIENT else np.zeros_like(h1)
        n2 = -h2 / norm2 if norm2 > ZERO_GRADIENT else np.zeros_like(h2)
        w1, w2 = _step_weights(norm1, norm2, config.step_weights)

        phi, candidate = _line_search(spec, x1, x2, (n1, n2), (w1, w2), config, log_base)
        if not candidate < value:
            return _Leg(x1, x2, value, iteration, True, history)

        new1, new2 = geodesic_step(x1, n1, w1 * phi), geodesic_step(x2, n2, w2 * phi)
        dx = math.sqrt(float(np.sum((new1 - x1) ** 2) + np.sum((new2 - x2) ** 2)))
        x1, x2, value = new1, new2, objective(new1, new2, spec, log_base)
        history.append(value)
        if dx < config.tol:
            return _Leg(x1, x2, value, iteration, True, history)

    return _Leg(x1, x2, value, budget, False, history)


def _sum_rate(spec: ChannelSpec, x1: AmplitudeVector, x2: AmplitudeVector, log_base: str) -> float:
    dist = ProductDistribution(x1**2 / np.sum(x1**2), x2**2 / np.sum(x2**2))
    return joint_rate(spec, dist, log_base).sum_rate


def descend(
    spec: ChannelSpec,
    start: tuple[AmplitudeVector, AmplitudeVector],
    config: Optional[OptimizerConfig] = None,
    *,
    log_base: str = LogBase.BITS,
    rng: SeedLike = None,
) -> OptResult:
    """
    Maximize I(X1;Y1) + I(X2;Y2) from one start.

    With `rng`, a run that stops on a vanishing projected gradient is
    perturbed once by a random tangent step of SADDLE_STEP on each sphere
    and descended again; the second leg is kept only if it ends strictly
    lower. Runs that stop on dx < tol are returned as they are.
    """
    config = config or OptimizerConfig()
    x1, x2 = as_amplitudes(start[0]), as_amplitudes(start[1])
    nx1, nx2 = spec.input_alphabet_sizes
    if x1.shape[0] != nx1 or x2.shape[0] != nx2:
        raise ConfigurationError('Start vectors do not match the channel input alphabets')

    leg = _descend_leg(spec, x1, x2, config, log_base, config.maxiter)
    iterations = leg.iterations

    remaining = config.maxiter - leg.iterations
    if rng is not None and leg.stationary and remaining > 0:
        generator = make_rng(rng)
        p1 = geodesic_step(leg.x1, random_tangent(leg.x1, generator), SADDLE_STEP)
        p2 = geodesic_step(leg.x2, random_tangent(leg.x2, generator), SADDLE_STEP)
        escape = _descend_leg(spec, p1, p2, config, log_base, remaining)
        if escape.value < leg.value - ZERO_GRADIENT:
            logger.debug(f'Escaped stationary point: {leg.value:.9f} -> {escape.value:.9f}')
            iterations += escape.iterations
            leg = escape

    rate = _sum_rate(spec, leg.x1, leg.x2, log_base)
    logger.debug(f'descend on {spec.name}: rate={rate:.9f} iterations={iterations} converged={leg.converged}')
    return OptResult(
        best_vectors=(leg.x1, leg.x2),
        best_sum_rate=rate,
        iterations=iterations,
        converged=leg.converged,
        log_base=log_base,
        start=(x1, x2),
        history=tuple(leg.history),
    )


def multi_restart(
    spec: ChannelSpec,
    config: Optional[OptimizerConfig] = None,
    rng: SeedLike = None,
    *,
    log_base: str = LogBase.BITS,
) -> OptResult:
    """
    Best of `config.restarts` descents from uniformly random starts.

    Restart k draws its start and its perturbations from the k-th spawned
    substream, so results do not depend on how restarts are scheduled.
    """
    config = config or OptimizerConfig()
    nx1, nx2 = spec.input_alphabet_sizes
    rates: Counter[str] = Counter()
    best: Optional[OptResult] = None

    for child in spawn(rng, config.restarts):
        start = (random_start(child, nx1), random_start(child, nx2))
        result = descend(spec, start, config, log_base=log_base, rng=child)
        rates[f'{result.best_sum_rate:.3f}'] += 1
        if best is None or result.best_sum_rate > best.best_sum_rate:
            best = result

    assert best is not None
    logger.info(f'{config.restarts} restarts on {spec.name}: best sum rate {best.best_sum_rate:.6f} {log_base}')
    return OptResult(
        best_vectors=best.best_vectors,
        best_sum_rate=best.best_sum_rate,
        iterations=best.iterations,
        converged=best.converged,
        log_base=log_base,
        start=best.start,
        history=best.history,
        restarts=config.restarts,
        histogram=dict(sorted(rates.items())),
    )
