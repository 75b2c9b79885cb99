"""
Optimizer configuration, amplitude vectors and results.

A product input distribution is parametrized by two unit vectors whose
squared entries are the two senders' input probabilities.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import numpy.typing as npt
from django.db import models

from core.exceptions import ConfigurationError, InvalidDistributionError

UNIT_TOL = 1e-10

AmplitudeVector = npt.NDArray[np.float64]


class StepWeights(models.TextChoices):
    """How the line-search angle is shared between the two spheres."""
    GRADIENT = 'gradient', 'Proportional to squared tangent gradient norms'
    EQUAL = 'equal', 'Equal weights'


def as_amplitudes(values: npt.ArrayLike, tol: float = UNIT_TOL) -> AmplitudeVector:
    """Validate a unit vector and return it as a float array."""
    vector = np.asarray(values, dtype=np.float64)
    if vector.ndim != 1 or vector.size < 2 or np.any(~np.isfinite(vector)):
        raise InvalidDistributionError('Amplitude vector must be a finite 1-D vector')
    norm = float(np.linalg.norm(vector))
    if abs(norm - 1.0) > tol:
        raise InvalidDistributionError(f'Amplitude vector has norm {norm:.12g}, not 1')
    return vector


@dataclass(frozen=True)
class OptimizerConfig:
    tol: float = 1e-6
    maxiter: int = 500
    restarts: int = 1000
    line_search_grid: int = 64
    refine_iters: int = 40
    step_weights: str = StepWeights.GRADIENT

    def __post_init__(self) -> None:
        if not self.tol > 0:
            raise ConfigurationError('tol must be positive')
        if self.maxiter < 1 or self.restarts < 1:
            raise ConfigurationError('maxiter and restarts must be at least 1')
        if self.line_search_grid < 2 or self.refine_iters < 0:
            raise ConfigurationError('line_search_grid must be >= 2 and refine_iters >= 0')
        if self.step_weights not in StepWeights.values:
            raise ConfigurationError(f"Unknown step weighting '{self.step_weights}'")


@dataclass(frozen=True, eq=False)
class OptResult:
    """
    Outcome of one descent or of the best of several restarts.

    `history` holds the objective at every accepted iterate of the final
    descent leg. `histogram` maps rates rounded to 1e-3 to restart counts
    and is only set by multi-restart runs.
    """
    best_vectors: tuple[AmplitudeVector, AmplitudeVector]
    best_sum_rate: float
    iterations: int
    converged: bool
    log_base: str = 'bits'
    start: Optional[tuple[AmplitudeVector, AmplitudeVector]] = None
    history: tuple[float, ...] = field(default=(), repr=False)
    restarts: int = 1
    histogram: Optional[dict[str, int]] = None

    @property
    def best_distributions(self) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
        x1, x2 = self.best_vectors
        return x1**2 / np.sum(x1**2), x2**2 / np.sum(x2**2)
