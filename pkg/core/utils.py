import math

import numpy as np
import numpy.typing as npt

from .exceptions import InvalidDistributionError

STOCHASTIC_TOL = 1e-12


def log_scale(log_base: str) -> float:
    """Divisor converting natural-log quantities to `log_base` units."""
    if log_base == 'bits':
        return math.log(2.0)
    if log_base == 'nats':
        return 1.0
    raise InvalidDistributionError(f"Unknown log base '{log_base}'")


def from_bits(value: float, log_base: str) -> float:
    """Convert a quantity expressed in bits to `log_base` units."""
    return value * math.log(2.0) / log_scale(log_base)


def as_probability_vector(
    values: npt.ArrayLike, tol: float = STOCHASTIC_TOL, name: str = 'pmf'
) -> npt.NDArray[np.float64]:
    vector = np.asarray(values, dtype=np.float64)
    if vector.ndim != 1 or vector.size == 0:
        raise InvalidDistributionError(f'{name} must be a non-empty 1-D vector')
    if np.any(~np.isfinite(vector)) or np.any(vector < 0):
        raise InvalidDistributionError(f'{name} has negative or non-finite entries')
    if abs(vector.sum() - 1.0) > tol:
        raise InvalidDistributionError(f'{name} sums to {vector.sum():.15g}, not 1')
    return vector
