import functools

import pytest

from teamgame.games import generate
from teamgame.refine import merge_infosets, transform
from teamgame.transform import mpta


@functools.lru_cache(maxsize=None)
def original(name):
    return generate(name)


@functools.lru_cache(maxsize=None)
def refined(name):
    return transform(original(name))


@functools.lru_cache(maxsize=None)
def unpruned(name):
    return merge_infosets(mpta(original(name)))


@pytest.fixture(scope="session")
def kuhn3():
    return original("21K3")


@pytest.fixture(scope="session")
def kuhn3_t():
    return refined("21K3")
