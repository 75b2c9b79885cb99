"""
Sender encoders and receiver decoders.

A sender with message bit m and correlation bit c transmits the
two-bit input symbol (m, c), i.e. index 2m + c.
"""
from typing import Optional

import numpy as np
import numpy.typing as npt

from boxes.correlations import sample_boxes
from boxes.models import CorrelationBox
from core.exceptions import InvalidStrategyError
from core.rng import SeedLike, make_rng
from interference.channels import ERASED
from interference.models import input_symbol

from .models import Decoder, Strategy, StrategyKind

IntArray = npt.NDArray[np.int64]


def encode_box(m1: int, m2: int, box: CorrelationBox, rng: SeedLike = None) -> tuple[int, int]:
    """Feed the message bits to the box and append each sender's box output."""
    x1, x2, _, _ = encode_box_batch(np.array([m1]), np.array([m2]), box, rng)
    return int(x1[0]), int(x2[0])


def encode_one_bit_comm(m1: int, m2: int) -> tuple[int, int]:
    """
    Sender 1 repeats her bit; Sender 2, told m1, picks b so that
    a XOR b = m1 AND m2.
    """
    a = m1
    b = (m1 & m2) ^ m1
    return input_symbol(m1, a), input_symbol(m2, b)


def encode_box_batch(
    m1: IntArray, m2: IntArray, box: CorrelationBox, rng: SeedLike = None
) -> tuple[IntArray, IntArray, IntArray, IntArray]:
    a, b = sample_boxes(box, m1, m2, rng)
    return (m1 << 1) | a, (m2 << 1) | b, a, b


def encode_one_bit_batch(m1: IntArray, m2: IntArray) -> tuple[IntArray, IntArray, IntArray, IntArray]:
    a = m1.copy()
    b = (m1 & m2) ^ m1
    return (m1 << 1) | a, (m2 << 1) | b, a, b


def encode_messages(
    strategy: Strategy, m1: IntArray, m2: IntArray, rng: SeedLike = None
) -> tuple[IntArray, IntArray, IntArray, IntArray]:
    """Channel inputs and correlation bits (x1, x2, a, b) for message arrays."""
    if strategy.kind == StrategyKind.BOX_ASSISTED:
        assert strategy.box is not None
        return encode_box_batch(m1, m2, strategy.box, rng)
    if strategy.kind == StrategyKind.ONE_BIT_COMM:
        return encode_one_bit_batch(m1, m2)
    raise InvalidStrategyError('Fixed-distribution strategies do not encode message bits')


def decode(
    y1: int, y2: int, erasure_symbol: Optional[int] = ERASED
) -> tuple[Optional[int], Optional[int]]:
    """Identity decode per receiver; the erasure symbol decodes to None."""
    def one(y: int) -> Optional[int]:
        return None if erasure_symbol is not None and y == erasure_symbol else y

    return one(y1), one(y2)


def decode_outputs(
    y: IntArray,
    erasure_symbol: Optional[int],
    decoder: str = Decoder.ERASURE_AWARE,
    rng: SeedLike = None,
) -> IntArray:
    """
    Vectorized receiver rule. Erased positions keep `erasure_symbol`
    under the erasure-aware decoder; the identity decoder replaces them
    with a uniformly guessed bit.
    """
    if decoder == Decoder.ERASURE_AWARE or erasure_symbol is None:
        return y
    erased = y == erasure_symbol
    guesses = make_rng(rng).integers(0, 2, size=y.shape)
    return np.where(erased, guesses, y)
