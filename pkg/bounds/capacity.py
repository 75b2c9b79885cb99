"""
Capacities of the elementary erasure channels used by the bounds.
"""
import dataclasses
from collections.abc import Sequence

import numpy as np
from scipy.special import entr

from core.exceptions import InvalidDistributionError
from core.utils import from_bits, log_scale
from interference.models import LogBase

from .models import FiveSymbolInput


def five_symbol_capacity_first_order(inp: FiveSymbolInput, log_base: str = LogBase.BITS) -> float:
    """-epsilon * sum_i p_i log p_i over the four delivered symbols."""
    return inp.epsilon * float(entr(inp.live).sum()) / log_scale(log_base)


def five_symbol_capacity_exact(inp: FiveSymbolInput, log_base: str = LogBase.BITS) -> float:
    """I(X;Y) = H(Y) - H(Y|X) of the five-symbol erasure channel."""
    eps = inp.epsilon
    delivered = eps * inp.live
    erased = 1.0 - eps + eps * inp.p_q
    h_y = entr(delivered).sum() + entr(erased)
    h_y_given_x = inp.live.sum() * (entr(eps) + entr(1.0 - eps))
    return max(0.0, float(h_y - h_y_given_x)) / log_scale(log_base)


def first_order_gaps(inp: FiveSymbolInput, epsilons: Sequence[float]) -> np.ndarray:
    """|exact - first order| in nats at each epsilon."""
    gaps = []
    for eps in epsilons:
        at = dataclasses.replace(inp, epsilon=eps)
        gaps.append(
            abs(five_symbol_capacity_exact(at, LogBase.NATS) - five_symbol_capacity_first_order(at, LogBase.NATS))
        )
    return np.array(gaps)


def first_order_gap_slope(inp: FiveSymbolInput, epsilons: Sequence[float]) -> float:
    """Least-squares slope of log |exact - first order| against log epsilon."""
    if len(epsilons) < 2 or min(epsilons) <= 0:
        raise InvalidDistributionError('Need at least two positive epsilons')
    gaps = first_order_gaps(inp, epsilons)
    if np.any(gaps <= 0):
        raise InvalidDistributionError('First-order gap vanished; slope is undefined')
    slope, _ = np.polyfit(np.log(epsilons), np.log(gaps), 1)
    return float(slope)


def bec_capacity(erasure_prob: float, log_base: str = LogBase.BITS) -> float:
    if not 0.0 <= erasure_prob <= 1.0:
        raise InvalidDistributionError(f'erasure probability {erasure_prob} outside [0, 1]')
    return from_bits(1.0 - erasure_prob, log_base)
