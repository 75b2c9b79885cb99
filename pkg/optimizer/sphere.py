"""
Objective, analytic gradient and great-circle geometry on the two
amplitude spheres.

The objective is f(x1, x2) = -(I(X1;Y1) + I(X2;Y2)) evaluated at
p1 = x1**2, p2 = x2**2. Each pair's information is written as

    I = sum_{x,y} p(x) Q(y|x) log(Q(y|x) / r(y)),

with Q the kernel averaged over the other sender and r the output
marginal, so that
    dI/dp_own[x]   = D(Q_x || r) - sum_y Q(y|x)
    dI/dp_other[j] = sum_{x,y} p_own[x] W[x, j, y] log(Q(y|x) / r(y)).
"""
import numpy as np
import numpy.typing as npt

from core.rng import SeedLike, make_rng
from core.utils import log_scale
from interference.information import PROB_FLOOR, batched_sum_rate
from interference.models import ChannelSpec, LogBase, Pair

from .models import AmplitudeVector


def objective(
    x1: AmplitudeVector, x2: AmplitudeVector, spec: ChannelSpec, log_base: str = LogBase.BITS
) -> float:
    return float(batched_objective(spec, x1[None, :], x2[None, :], log_base)[0])


def batched_objective(
    spec: ChannelSpec,
    x1: npt.NDArray[np.float64],
    x2: npt.NDArray[np.float64],
    log_base: str = LogBase.BITS,
) -> npt.NDArray[np.float64]:
    """Objective for rows of x1 (B, |X1|) and x2 (B, |X2|)."""
    return -batched_sum_rate(spec, x1**2, x2**2) / log_scale(log_base)


def _pair_partials(
    own: npt.NDArray[np.float64], other: npt.NDArray[np.float64], kernel: npt.NDArray[np.float64]
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    conditional = np.einsum('j,ijk->ik', other, kernel)
    output = own @ conditional
    log_ratio = (
        np.log(np.maximum(conditional, PROB_FLOOR))
        - np.log(np.maximum(output, PROB_FLOOR))[None, :]
    )
    d_own = np.sum(conditional * log_ratio, axis=1) - conditional.sum(axis=1)
    d_other = np.einsum('i,ijk,ik->j', own, kernel, log_ratio)
    return d_own, d_other


def gradient(
    x1: AmplitudeVector, x2: AmplitudeVector, spec: ChannelSpec, log_base: str = LogBase.BITS
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """Gradient of `objective` with respect to the amplitude entries."""
    p1, p2 = x1**2, x2**2
    d1_first, d2_first = _pair_partials(p1, p2, spec.pair_kernel(Pair.FIRST))
    d2_second, d1_second = _pair_partials(p2, p1, spec.pair_kernel(Pair.SECOND))

    scale = log_scale(log_base)
    grad_p1 = -(d1_first + d1_second) / scale
    grad_p2 = -(d2_first + d2_second) / scale
    return 2.0 * x1 * grad_p1, 2.0 * x2 * grad_p2


def tangent_project(g: npt.NDArray[np.float64], x: AmplitudeVector) -> npt.NDArray[np.float64]:
    """Remove the radial component of g at the unit vector x."""
    return g - np.dot(g, x) * x


def geodesic_step(x: AmplitudeVector, direction: npt.NDArray[np.float64], angle: float) -> AmplitudeVector:
    """Move along the great circle through x with unit tangent `direction`."""
    moved = np.cos(angle) * x + np.sin(angle) * direction
    return moved / np.linalg.norm(moved)


def geodesic_batch(
    x: AmplitudeVector, direction: npt.NDArray[np.float64], angles: npt.NDArray[np.float64]
) -> npt.NDArray[np.float64]:
    moved = np.cos(angles)[:, None] * x[None, :] + np.sin(angles)[:, None] * direction[None, :]
    return moved / np.linalg.norm(moved, axis=1, keepdims=True)


def random_start(rng: SeedLike = None, size: int = 4) -> AmplitudeVector:
    """Uniformly distributed point on the unit sphere in R^size."""
    vector = make_rng(rng).standard_normal(size)
    return vector / np.linalg.norm(vector)


def random_tangent(x: AmplitudeVector, rng: SeedLike = None) -> npt.NDArray[np.float64]:
    """Uniformly oriented unit tangent vector at x."""
    generator = make_rng(rng)
    while True:
        h = tangent_project(generator.standard_normal(x.shape[0]), x)
        norm = np.linalg.norm(h)
        if norm > 1e-8:
            return h / norm
