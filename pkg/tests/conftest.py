from functools import lru_cache

import numpy as np
import pytest

from oscdict.dictionary import gen_dictionary


@lru_cache(maxsize=None)
def cached_dictionary(p, kind):
    return gen_dictionary(p, kind)


@pytest.fixture
def dictionary():
    return cached_dictionary


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_unit(rng, p, n=None):
    shape = (p,) if n is None else (n, p)
    v = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)
