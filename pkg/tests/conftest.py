from pathlib import Path

import numpy as np
import pytest

import optisph as osp

GRID_CACHE = Path(__file__).parent / ".grid_cache"


@pytest.fixture(scope="session")
def grid_cache_dir():
    GRID_CACHE.mkdir(exist_ok=True)
    return GRID_CACHE


@pytest.fixture(scope="session")
def interleaved16():
    return osp.make_grid(16)


@pytest.fixture(scope="session")
def interleaved64():
    return osp.make_grid(64)


@pytest.fixture(scope="session")
def condmin16():
    return osp.make_grid(16, ordering=osp.Ordering.CONDITION_MINIMIZED)


@pytest.fixture(scope="session")
def condmin32():
    return osp.make_grid(32, ordering=osp.Ordering.CONDITION_MINIMIZED)


@pytest.fixture(scope="session")
def condmin64(grid_cache_dir):
    return osp.make_grid(
        64, ordering=osp.Ordering.CONDITION_MINIMIZED, cache_dir=grid_cache_dir
    )


@pytest.fixture(scope="session")
def condmin256(grid_cache_dir):
    return osp.make_grid(
        256, ordering=osp.Ordering.CONDITION_MINIMIZED, cache_dir=grid_cache_dir
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)
