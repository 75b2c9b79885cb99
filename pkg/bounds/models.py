"""
Inputs and intermediate quantities of the capacity bounds.
"""
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from core.exceptions import InvalidDistributionError
from core.utils import STOCHASTIC_TOL

GREEK_TOL = 1e-9


@dataclass(frozen=True)
class FiveSymbolInput:
    """
    Input law of a five-symbol erasure channel: symbols 1..4 pass with
    probability epsilon and are replaced by '?' otherwise; the fifth
    symbol '?' (probability p_q) is always received as '?'.
    """
    p1: float
    p2: float
    p3: float
    p4: float
    p_q: float
    epsilon: float

    def __post_init__(self) -> None:
        probabilities = self.probabilities
        if np.any(probabilities < 0) or abs(probabilities.sum() - 1.0) > STOCHASTIC_TOL:
            raise InvalidDistributionError('Five-symbol input must be a probability vector')
        if not 0.0 <= self.epsilon <= 1.0:
            raise InvalidDistributionError(f'epsilon={self.epsilon} outside [0, 1]')

    @property
    def probabilities(self) -> npt.NDArray[np.float64]:
        return np.array([self.p1, self.p2, self.p3, self.p4, self.p_q], dtype=np.float64)

    @property
    def live(self) -> npt.NDArray[np.float64]:
        return self.probabilities[:4]

    @classmethod
    def symmetric(cls, p_q: float, epsilon: float) -> 'FiveSymbolInput':
        share = (1.0 - p_q) / 4
        return cls(share, share, share, share, p_q, epsilon)


@dataclass(frozen=True)
class GreekWeights:
    """
    Decomposition of Channel II's four delivered output probabilities:

        Pr(00) = k00 * alpha    Pr(01) = k01 * beta
        Pr(10) = k10 * gamma    Pr(11) = k11 * delta

    (per unit epsilon), where the k's are the probabilities of the two
    senders' first input bits.
    """
    alpha: float
    beta: float
    gamma: float
    delta: float
    k00: float
    k01: float
    k10: float
    k11: float

    def __post_init__(self) -> None:
        if np.any(self.letters < -GREEK_TOL) or np.any(self.letters > 1.0 + GREEK_TOL):
            raise InvalidDistributionError('Greek weights must lie in [0, 1]')
        if np.any(self.k < 0) or abs(self.k.sum() - 1.0) > STOCHASTIC_TOL:
            raise InvalidDistributionError('k weights must be a probability vector')

    @property
    def letters(self) -> npt.NDArray[np.float64]:
        return np.array([self.alpha, self.beta, self.gamma, self.delta])

    @property
    def k(self) -> npt.NDArray[np.float64]:
        return np.array([self.k00, self.k01, self.k10, self.k11])

    @property
    def total(self) -> float:
        return float(self.letters.sum())

    @property
    def output_probabilities(self) -> npt.NDArray[np.float64]:
        return self.k * self.letters


@dataclass(frozen=True)
class BoundsRow:
    """One epsilon of the bounds table, every rate in `log_base` units."""
    epsilon: float
    log_base: str
    classical_bound: float
    classical_bound_bits: float
    classical_bound_nats: float
    quantum_lower_bound: float
    quantum_upper_bound: float
    super_quantum_rate: float
