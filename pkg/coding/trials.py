"""
Monte Carlo coding experiments: message generation, encoding, channel
transmission, decoding and empirical rate estimation.
"""
import itertools
import logging
import math
from typing import Optional

import numpy as np
import numpy.typing as npt

from boxes.correlations import deterministic_box, pr_box, tsirelson_box
from boxes.models import DeterministicStrategy
from core.exceptions import ConfigurationError, DecodeError, InvalidStrategyError, RateModelError
from core.rng import SeedLike, make_rng, spawn
from core.utils import from_bits
from interference.channels import sample_outputs
from interference.information import mutual_information
from interference.models import ChannelSpec, LogBase, Pair, ProductDistribution, RateReport, input_label

from .encoders import IntArray, decode_outputs, encode_messages
from .models import (
    Decoder,
    MessageSource,
    RateModel,
    Resource,
    Strategy,
    StrategyKind,
    TrialStats,
    merge_stats,
)

logger = logging.getLogger(__name__)

TRANSCRIPT_HEADER = ('trial', 'm1', 'm2', 'a', 'b', 'x1', 'x2', 'y1', 'y2', 'm1_hat', 'm2_hat')


def pr_strategy(decoder: str = Decoder.ERASURE_AWARE) -> Strategy:
    return Strategy(StrategyKind.BOX_ASSISTED, 'pr', box=pr_box(), decoder=decoder)


def tsirelson_strategy(decoder: str = Decoder.ERASURE_AWARE) -> Strategy:
    return Strategy(StrategyKind.BOX_ASSISTED, 'quantum', box=tsirelson_box(), decoder=decoder)


def one_bit_strategy(decoder: str = Decoder.ERASURE_AWARE) -> Strategy:
    return Strategy(StrategyKind.ONE_BIT_COMM, 'one-bit-comm', decoder=decoder)


def classical_strategy(decoder: str = Decoder.ERASURE_AWARE) -> Strategy:
    """Both senders append a constant 0 (a deterministic box with fa = fb = 0)."""
    box = deterministic_box(DeterministicStrategy(fa=(0, 0), fb=(0, 0)))
    return Strategy(StrategyKind.BOX_ASSISTED, 'classical', box=box, decoder=decoder)


def fixed_strategy(distribution: ProductDistribution, decoder: str = Decoder.ERASURE_AWARE) -> Strategy:
    return Strategy(StrategyKind.FIXED_DISTRIBUTION, 'fixed-distribution', distribution=distribution, decoder=decoder)


def strategy_for_resource(resource: str, decoder: str = Decoder.ERASURE_AWARE) -> Strategy:
    constructors = {
        Resource.CLASSICAL: classical_strategy,
        Resource.QUANTUM: tsirelson_strategy,
        Resource.PR: pr_strategy,
        Resource.ONE_BIT_COMM: one_bit_strategy,
    }
    try:
        return constructors[Resource(resource)](decoder)
    except ValueError as exc:
        raise ConfigurationError(f"Unknown resource '{resource}'") from exc


def _erasure_symbols(spec: ChannelSpec) -> tuple[Optional[int], Optional[int]]:
    if not spec.erasure:
        return None, None
    ny1, ny2 = spec.output_alphabet_sizes
    return ny1 - 1, ny2 - 1


def _message_bits(
    source: str, n: int, offset: int, rng: np.random.Generator
) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.int64]]:
    if source == MessageSource.EXHAUSTIVE:
        index = (np.arange(n, dtype=np.int64) + offset) % 4
        return index >> 1, index & 1
    if source == MessageSource.UNIFORM:
        return rng.integers(0, 2, size=n), rng.integers(0, 2, size=n)
    raise ConfigurationError(f"Unknown message source '{source}'")


def _fixed_inputs(
    spec: ChannelSpec, dist: ProductDistribution, source: str, n: int, offset: int, rng: np.random.Generator
) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.int64]]:
    nx1, nx2 = spec.input_alphabet_sizes
    if dist.d1.shape[0] != nx1 or dist.d2.shape[0] != nx2:
        raise InvalidStrategyError('Input distribution does not match the channel alphabets')
    if source == MessageSource.EXHAUSTIVE:
        index = (np.arange(n, dtype=np.int64) + offset) % (nx1 * nx2)
        return index // nx2, index % nx2
    return rng.choice(nx1, size=n, p=dist.d1), rng.choice(nx2, size=n, p=dist.d2)


def _joint_counts(
    messages: IntArray, received: IntArray, shape: tuple[int, int]
) -> IntArray:
    flat = np.bincount(messages * shape[1] + received, minlength=shape[0] * shape[1])
    return flat.reshape(shape).astype(np.int64)


def run_trials(
    spec: ChannelSpec,
    strategy: Strategy,
    messages: str = MessageSource.UNIFORM,
    n: int = 1,
    rng: SeedLike = None,
    *,
    transcript: bool = False,
    trial_offset: int = 0,
) -> TrialStats:
    """
    Simulate `n` independent channel uses.

    Randomness is drawn in a fixed order (messages, box outputs, channel
    noise, decoder guesses), so a given seed always reproduces the same
    counts.
    """
    if n < 1:
        raise ConfigurationError('Trial count must be at least 1')

    generator = make_rng(rng)
    nx1, nx2 = spec.input_alphabet_sizes
    ny1, ny2 = spec.output_alphabet_sizes
    a = b = None

    if strategy.carries_messages:
        if (nx1, nx2) != (4, 4):
            raise InvalidStrategyError('Message-carrying strategies need two-bit inputs on both senders')
        m1, m2 = _message_bits(messages, n, trial_offset, generator)
        x1, x2, a, b = encode_messages(strategy, m1, m2, generator)
        message_sizes = (2, 2)
    else:
        assert strategy.distribution is not None
        x1, x2 = _fixed_inputs(spec, strategy.distribution, messages, n, trial_offset, generator)
        m1, m2 = x1, x2
        message_sizes = (nx1, nx2)

    y1, y2 = sample_outputs(spec, x1, x2, generator)
    erasure_1, erasure_2 = _erasure_symbols(spec)
    r1 = decode_outputs(y1, erasure_1, strategy.decoder, generator)
    r2 = decode_outputs(y2, erasure_2, strategy.decoder, generator)

    erased_1 = r1 == erasure_1 if erasure_1 is not None else np.zeros(n, dtype=bool)
    erased_2 = r2 == erasure_2 if erasure_2 is not None else np.zeros(n, dtype=bool)
    errors_1 = errors_2 = 0
    if strategy.carries_messages:
        errors_1 = int(np.sum(~erased_1 & (r1 != m1)))
        errors_2 = int(np.sum(~erased_2 & (r2 != m2)))

    rows = None
    if transcript:
        rows = _transcript_rows(spec, strategy, trial_offset, m1, m2, a, b, x1, x2, y1, y2, r1, r2)

    stats = TrialStats(
        n=n,
        errors_1=errors_1,
        errors_2=errors_2,
        erasures_1=int(erased_1.sum()),
        erasures_2=int(erased_2.sum()),
        joint_1=_joint_counts(m1, r1, (message_sizes[0], ny1)),
        joint_2=_joint_counts(m2, r2, (message_sizes[1], ny2)),
        carries_messages=strategy.carries_messages,
        transcript=rows,
    )
    logger.debug(
        f'{strategy.label} on {spec.name}: n={n} errors=({errors_1},{errors_2}) '
        f'erasures=({stats.erasures_1},{stats.erasures_2})'
    )
    return stats


def run_sharded(
    spec: ChannelSpec,
    strategy: Strategy,
    messages: str,
    n: int,
    seed: SeedLike,
    shards: int,
    *,
    transcript: bool = False,
) -> TrialStats:
    """Split `n` trials over independent seeded substreams and merge the counts."""
    if shards < 1 or shards > n:
        raise ConfigurationError('Shard count must be between 1 and the trial count')

    sizes = [n // shards + (1 if k < n % shards else 0) for k in range(shards)]
    offsets = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    merged = None
    for size, offset, child in zip(sizes, offsets, spawn(seed, shards)):
        stats = run_trials(spec, strategy, messages, size, child, transcript=transcript, trial_offset=int(offset))
        merged = stats if merged is None else merge_stats(merged, stats)
    assert merged is not None
    return merged


def _transcript_rows(
    spec: ChannelSpec,
    strategy: Strategy,
    offset: int,
    m1: IntArray,
    m2: IntArray,
    a: Optional[IntArray],
    b: Optional[IntArray],
    x1: IntArray,
    x2: IntArray,
    y1: IntArray,
    y2: IntArray,
    r1: IntArray,
    r2: IntArray,
) -> list[tuple[str, ...]]:
    labels_1 = spec.output_labels(Pair.FIRST)
    labels_2 = spec.output_labels(Pair.SECOND)
    two_bit = spec.input_alphabet_sizes == (4, 4)

    def x_label(x: int) -> str:
        return input_label(x) if two_bit else str(x)

    rows: list[tuple[str, ...]] = []
    for k in range(len(x1)):
        message_1 = str(m1[k]) if strategy.carries_messages else '-'
        message_2 = str(m2[k]) if strategy.carries_messages else '-'
        rows.append((
            str(offset + k),
            message_1,
            message_2,
            '-' if a is None else str(a[k]),
            '-' if b is None else str(b[k]),
            x_label(int(x1[k])),
            x_label(int(x2[k])),
            labels_1[y1[k]],
            labels_2[y2[k]],
            labels_1[r1[k]],
            labels_2[r2[k]],
        ))
    return rows


def errs_when_unerased(spec: ChannelSpec, strategy: Strategy) -> bool:
    """
    Whether any reachable non-erased reception decodes to the wrong bit.

    Enumerates every message pair, every correlation outcome of positive
    probability and every channel output of positive probability.
    """
    if not strategy.carries_messages or spec.input_alphabet_sizes != (4, 4):
        return True
    erasure_1, erasure_2 = _erasure_symbols(spec)
    if strategy.decoder == Decoder.IDENTITY and spec.erasure:
        return True

    for m1, m2 in itertools.product((0, 1), repeat=2):
        if strategy.box is not None:
            outcomes = [(a, b) for a, b in itertools.product((0, 1), repeat=2) if strategy.box.pmf[m1, m2, a, b] > 0]
        else:
            outcomes = [(m1, (m1 & m2) ^ m1)]
        for a, b in outcomes:
            cell = spec.pmf[2 * m1 + a, 2 * m2 + b]
            for y1, y2 in zip(*np.nonzero(cell)):
                if y1 != erasure_1 and y1 != m1:
                    return True
                if y2 != erasure_2 and y2 != m2:
                    return True
    return False


def resolve_rate_model(spec: ChannelSpec, strategy: Strategy, model: str = RateModel.AUTO) -> str:
    """Erasure-channel accounting for strategies that never err when not erased, plug-in MI otherwise."""
    if model != RateModel.AUTO:
        return model
    if errs_when_unerased(spec, strategy):
        return RateModel.PLUG_IN_MI
    return RateModel.ERASURE_CHANNEL


def assert_error_free(stats: TrialStats, spec: ChannelSpec, strategy: Strategy) -> None:
    """A strategy that cannot err when not erased on `spec` must show zero decode errors."""
    if errs_when_unerased(spec, strategy):
        return
    if stats.errors_1 or stats.errors_2:
        raise DecodeError(
            f'{strategy.label} strategy decoded wrongly '
            f'({stats.errors_1} and {stats.errors_2} errors in {stats.n} trials)'
        )


def empirical_rate(stats: TrialStats, model: str, log_base: str = LogBase.BITS) -> RateReport:
    """
    Per-pair rates from trial counts.

    Erasure-channel accounting gives 1 - (erasure fraction) bits per pair
    and a sum standard error that adds the two binomial standard errors.
    Plug-in accounting is the mutual information of the empirical
    (message, reception) joint distribution.
    """
    if stats.n < 1:
        raise ConfigurationError('No trials to estimate a rate from')

    if model == RateModel.ERASURE_CHANNEL:
        if not stats.carries_messages:
            raise RateModelError('Erasure-channel accounting needs message-carrying trials')
        if stats.errors_1 or stats.errors_2:
            raise RateModelError(
                f'Erasure-channel accounting rejected: {stats.errors_1 + stats.errors_2} non-erased decode errors'
            )
        unit = from_bits(1.0, log_base)
        rates = []
        stderr = 0.0
        for pair in (Pair.FIRST, Pair.SECOND):
            fraction = stats.erasure_fraction(pair)
            rates.append((1.0 - fraction) * unit)
            stderr += math.sqrt(fraction * (1.0 - fraction) / stats.n) * unit
        return RateReport(r1=rates[0], r2=rates[1], log_base=log_base, sum_stderr=stderr)

    if model == RateModel.PLUG_IN_MI:
        return RateReport(
            r1=mutual_information(stats.joint_1 / stats.n, log_base),
            r2=mutual_information(stats.joint_2 / stats.n, log_base),
            log_base=log_base,
        )

    raise ConfigurationError(f"Rate model '{model}' must be resolved to a concrete model first")
