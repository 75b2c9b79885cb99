"""
Entropies and mutual informations of product-input channel uses.

All internal arithmetic is in nats; results are converted to the
requested base at the boundary. 0 log 0 is taken as 0 throughout.
"""
import numpy as np
import numpy.typing as npt
from scipy.special import entr

from core.exceptions import InvalidDistributionError
from core.utils import as_probability_vector, log_scale

from .channels import pair_marginal
from .models import ChannelSpec, LogBase, Pair, ProductDistribution, RateReport

# Probabilities are clamped to this floor before taking logs.
PROB_FLOOR = 1e-15


def entropy(pmf: npt.ArrayLike, log_base: str = LogBase.BITS) -> float:
    vector = as_probability_vector(pmf)
    return float(entr(vector).sum()) / log_scale(log_base)


def binary_entropy(p: float, log_base: str = LogBase.BITS) -> float:
    if not 0.0 <= p <= 1.0:
        raise InvalidDistributionError(f'p={p} outside [0, 1]')
    return float(entr(p) + entr(1.0 - p)) / log_scale(log_base)


def mutual_information(joint: npt.ArrayLike, log_base: str = LogBase.BITS) -> float:
    """I(X;Y) = H(X) + H(Y) - H(X,Y) of an explicit joint pmf p(x, y)."""
    table = np.asarray(joint, dtype=np.float64)
    if table.ndim != 2:
        raise InvalidDistributionError('Joint pmf must be a 2-D table')
    as_probability_vector(table.ravel(), name='joint pmf')

    h_x = entr(table.sum(axis=1)).sum()
    h_y = entr(table.sum(axis=0)).sum()
    h_xy = entr(table).sum()
    return max(0.0, float(h_x + h_y - h_xy)) / log_scale(log_base)


def pair_joint(spec: ChannelSpec, dist: ProductDistribution, pair: int) -> npt.NDArray[np.float64]:
    """Joint pmf p(x_i, y_i) induced on one pair."""
    return dist.own(pair)[:, None] * pair_marginal(spec, dist, pair)


def joint_rate(
    spec: ChannelSpec, dist: ProductDistribution, log_base: str = LogBase.BITS
) -> RateReport:
    return RateReport(
        r1=mutual_information(pair_joint(spec, dist, Pair.FIRST), log_base),
        r2=mutual_information(pair_joint(spec, dist, Pair.SECOND), log_base),
        log_base=log_base,
    )


def bsc_capacity(flip_probability: float, log_base: str = LogBase.BITS) -> float:
    """Capacity 1 - H(p) of a binary symmetric channel."""
    one_bit = np.log(2.0) / log_scale(log_base)
    return float(one_bit - binary_entropy(flip_probability, log_base))


def batched_pair_information(
    own: npt.NDArray[np.float64],
    other: npt.NDArray[np.float64],
    kernel: npt.NDArray[np.float64],
) -> npt.NDArray[np.float64]:
    """
    Mutual information (nats) of one pair for a batch of input weights.

    `own` is (B, |X_i|), `other` is (B, |X_j|) and `kernel` is indexed
    (own input, other input, own output). The weights need not be
    normalized: the value is the same polynomial-log expression whose
    gradient the optimizer uses, and equals I(X_i;Y_i) on the simplex.
    """
    conditional = np.einsum('bj,ijk->bik', other, kernel)
    output = np.einsum('bi,bik->bk', own, conditional)
    log_ratio = (
        np.log(np.maximum(conditional, PROB_FLOOR))
        - np.log(np.maximum(output, PROB_FLOOR))[:, None, :]
    )
    return np.einsum('bi,bik,bik->b', own, conditional, log_ratio)


def batched_sum_rate(
    spec: ChannelSpec,
    d1: npt.NDArray[np.float64],
    d2: npt.NDArray[np.float64],
) -> npt.NDArray[np.float64]:
    """I(X1;Y1) + I(X2;Y2) in nats for rows of d1 (B, |X1|) and d2 (B, |X2|)."""
    first = batched_pair_information(d1, d2, spec.pair_kernel(Pair.FIRST))
    second = batched_pair_information(d2, d1, spec.pair_kernel(Pair.SECOND))
    return first + second
