"""
First-order capacity bounds for Channel II.

To first order in epsilon, any strategy's sum rate is bounded by
-epsilon * sum_i p_i log p_i over the probabilities of the four outputs
Channel II can deliver. For classical product inputs these factor as
p = k * (alpha, beta, gamma, delta) with alpha + beta + gamma + delta <= 3;
for entangled senders they sum to at most the CHSH win probability.
"""
import logging
import math
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt
from scipy.optimize import minimize
from scipy.special import entr

from core.exceptions import InvalidDistributionError, InvariantViolation
from core.rng import SeedLike, make_rng
from core.utils import as_probability_vector, from_bits, log_scale
from interference.channels import build_channel_one
from interference.information import mutual_information, pair_joint
from interference.models import LogBase, Pair, ProductDistribution

from .models import GREEK_TOL, BoundsRow, GreekWeights

logger = logging.getLogger(__name__)

CHSH_QUANTUM_WIN = math.cos(math.pi / 8) ** 2
GREEK_BUDGET = 3.0
# Probabilities are clamped to this floor inside the numeric objectives.
NUMERIC_FLOOR = 1e-300


def _check_epsilon(epsilon: float) -> None:
    if not 0.0 <= epsilon <= 1.0:
        raise InvalidDistributionError(f'epsilon={epsilon} outside [0, 1]')


def classical_bound_channel_two(epsilon: float, log_base: str = LogBase.BITS) -> float:
    """Maximum at k = 1/4 and every greek weight 3/4: epsilon * (3/4) * log(16/3)."""
    _check_epsilon(epsilon)
    return epsilon * 4 * (3 / 16) * math.log(16 / 3) / log_scale(log_base)


def quantum_bound_channel_two(epsilon: float, log_base: str = LogBase.BITS) -> float:
    """Four equal outputs sharing the CHSH win probability c: epsilon * c * log(4 / c)."""
    _check_epsilon(epsilon)
    c = CHSH_QUANTUM_WIN
    return epsilon * c * math.log(4 / c) / log_scale(log_base)


def quantum_lower_bound(epsilon: float, log_base: str = LogBase.BITS) -> float:
    """Rate of the Tsirelson strategy: two erasure channels each passing with probability c * epsilon."""
    _check_epsilon(epsilon)
    return from_bits(2 * CHSH_QUANTUM_WIN * epsilon, log_base)


def super_quantum_rate(epsilon: float, log_base: str = LogBase.BITS) -> float:
    _check_epsilon(epsilon)
    return from_bits(2 * epsilon, log_base)


def _greek_letter(numerator: float, denominator: float) -> float:
    # The letter multiplies `denominator`, so it is irrelevant when that vanishes.
    return numerator / denominator if denominator > 0 else 0.0


def verify_greek_constraint(d1: npt.ArrayLike, d2: npt.ArrayLike) -> GreekWeights:
    """
    Factor Channel II's delivered output probabilities for the product
    input d1 x d2 and check that the four greek weights sum to at most 3.
    """
    p1 = as_probability_vector(d1, name='d1')
    p2 = as_probability_vector(d2, name='d2')
    if p1.shape != (4,) or p2.shape != (4,):
        raise InvalidDistributionError('Channel II inputs have four symbols')

    p = p1[0] + p1[1]
    q = p2[0] + p2[1]
    weights = GreekWeights(
        alpha=_greek_letter(p1[0] * p2[0] + p1[1] * p2[1], p * q),
        beta=_greek_letter(p1[0] * p2[2] + p1[1] * p2[3], p * (1 - q)),
        gamma=_greek_letter(p1[2] * p2[0] + p1[3] * p2[1], (1 - p) * q),
        delta=_greek_letter(p1[2] * p2[3] + p1[3] * p2[2], (1 - p) * (1 - q)),
        k00=p * q,
        k01=p * (1 - q),
        k10=(1 - p) * q,
        k11=(1 - p) * (1 - q),
    )
    if weights.total > GREEK_BUDGET + GREEK_TOL:
        raise InvariantViolation(f'Greek weights sum to {weights.total:.12g} > 3')
    return weights


def first_order_value(output_probabilities: npt.ArrayLike, epsilon: float = 1.0, log_base: str = LogBase.BITS) -> float:
    """-epsilon * sum p log p of the delivered output probabilities."""
    return epsilon * float(entr(np.asarray(output_probabilities, dtype=np.float64)).sum()) / log_scale(log_base)


def _neg_entropy_and_grad(p: np.ndarray) -> tuple[float, np.ndarray]:
    clamped = np.maximum(p, NUMERIC_FLOOR)
    return float(np.sum(clamped * np.log(clamped))), np.log(clamped) + 1.0


def classical_bound_numeric(
    log_base: str = LogBase.BITS,
    starts: int = 20,
    rng: SeedLike = None,
    epsilon: float = 1.0,
) -> tuple[float, GreekWeights]:
    """
    Maximize the first-order value over (k, greek weights) with SLSQP
    from `starts` random feasible-ish points; returns the best value and
    its maximizer.
    """
    _check_epsilon(epsilon)
    generator = make_rng(rng)

    def negative(z: np.ndarray) -> tuple[float, np.ndarray]:
        k, w = z[:4], z[4:]
        value, grad_p = _neg_entropy_and_grad(k * w)
        return value, np.concatenate([grad_p * w, grad_p * k])

    constraints = [
        {'type': 'eq', 'fun': lambda z: np.sum(z[:4]) - 1.0, 'jac': lambda z: np.r_[np.ones(4), np.zeros(4)]},
        {'type': 'eq', 'fun': lambda z: np.sum(z[4:]) - GREEK_BUDGET, 'jac': lambda z: np.r_[np.zeros(4), np.ones(4)]},
    ]
    best_value, best_z = -np.inf, None
    for _ in range(starts):
        z0 = np.concatenate([generator.dirichlet(np.ones(4)), generator.uniform(0.5, 1.0, 4)])
        result = minimize(
            negative, z0, jac=True, method='SLSQP', bounds=[(0.0, 1.0)] * 8,
            constraints=constraints, options={'ftol': 1e-14, 'maxiter': 500},
        )
        if result.success and -result.fun > best_value:
            best_value, best_z = -result.fun, result.x

    if best_z is None:
        raise InvariantViolation('Classical bound search did not converge from any start')
    k = np.clip(best_z[:4], 0.0, None)
    k = k / k.sum()
    w = np.clip(best_z[4:], 0.0, 1.0)
    weights = GreekWeights(*w, *k)
    logger.debug(f'classical bound search: value={best_value:.12f} nats over {starts} starts')
    return epsilon * best_value / log_scale(log_base), weights


def quantum_bound_numeric(
    log_base: str = LogBase.BITS,
    starts: int = 20,
    rng: SeedLike = None,
    epsilon: float = 1.0,
) -> tuple[float, npt.NDArray[np.float64]]:
    """Maximize -sum p log p over four outputs summing to the CHSH win probability."""
    _check_epsilon(epsilon)
    generator = make_rng(rng)
    constraints = [{'type': 'eq', 'fun': lambda p: np.sum(p) - CHSH_QUANTUM_WIN, 'jac': lambda p: np.ones(4)}]

    best_value, best_p = -np.inf, None
    for _ in range(starts):
        p0 = CHSH_QUANTUM_WIN * generator.dirichlet(np.ones(4))
        result = minimize(
            _neg_entropy_and_grad, p0, jac=True, method='SLSQP', bounds=[(0.0, 1.0)] * 4,
            constraints=constraints, options={'ftol': 1e-14, 'maxiter': 500},
        )
        if result.success and -result.fun > best_value:
            best_value, best_p = -result.fun, result.x

    if best_p is None:
        raise InvariantViolation('Quantum bound search did not converge from any start')
    return epsilon * best_value / log_scale(log_base), best_p


def rate_one_scheme_check(c: float, log_base: str = LogBase.BITS) -> float:
    """
    I(X2;Y2) on Channel I when Sender 1 is uniform on {00, 01} (so
    I(X1;Y1) = 1) and Sender 2 sends 00 with probability c, 10 otherwise.
    Receiver 2's output is masked by Sender 1's second bit, so this is 0.
    """
    if not 0.0 <= c <= 1.0:
        raise InvalidDistributionError(f'c={c} outside [0, 1]')
    dist = ProductDistribution(np.array([0.5, 0.5, 0.0, 0.0]), np.array([c, 0.0, 1.0 - c, 0.0]))
    return mutual_information(pair_joint(build_channel_one(), dist, Pair.SECOND), log_base)


def bounds_table(epsilons: Sequence[float], log_base: str = LogBase.BITS) -> list[BoundsRow]:
    return [
        BoundsRow(
            epsilon=float(eps),
            log_base=log_base,
            classical_bound=classical_bound_channel_two(eps, log_base),
            classical_bound_bits=classical_bound_channel_two(eps, LogBase.BITS),
            classical_bound_nats=classical_bound_channel_two(eps, LogBase.NATS),
            quantum_lower_bound=quantum_lower_bound(eps, log_base),
            quantum_upper_bound=quantum_bound_channel_two(eps, log_base),
            super_quantum_rate=super_quantum_rate(eps, log_base),
        )
        for eps in epsilons
    ]
