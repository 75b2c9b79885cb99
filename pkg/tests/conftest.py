import zlib

import numpy as np
import pytest

from interference.channels import build_channel_one, build_channel_two
from optimizer.models import OptimizerConfig

from .factories import reseed


@pytest.fixture(autouse=True)
def seeded_factories(request):
    """Reseed the factory generator from the test id so every test is reproducible on its own."""
    reseed(zlib.crc32(request.node.nodeid.encode()))


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)


@pytest.fixture
def channel_one():
    return build_channel_one()


@pytest.fixture
def channel_two():
    return build_channel_two(0.2)


@pytest.fixture
def quick_optimizer():
    """Small search settings so optimizer tests stay fast."""
    return OptimizerConfig(tol=1e-6, maxiter=200, restarts=4, line_search_grid=32, refine_iters=20)
