"""Seeded random sources for reproducible experiments."""
from typing import Union

import numpy as np

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator, None]


def make_rng(seed: SeedLike = None) -> np.random.Generator:
    """Return a Generator; an existing Generator is passed through unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def spawn(source: SeedLike, n: int) -> list[np.random.Generator]:
    """
    Create `n` independent child generators.

    Children derived from the same integer seed are identical across runs,
    so work can be split into shards without changing results.
    """
    if n < 0:
        raise ValueError('n must be non-negative')

    if isinstance(source, np.random.Generator):
        return source.spawn(n)
    if isinstance(source, np.random.SeedSequence):
        children = source.spawn(n)
    else:
        children = np.random.SeedSequence(source).spawn(n)
    return [np.random.default_rng(child) for child in children]
