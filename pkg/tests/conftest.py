import numpy as np
import pytest


@pytest.fixture
def np_rng():
    return np.random.default_rng(1234)


def random_gray(rng, h, w):
    return rng.integers(0, 256, size=(h, w), dtype=np.uint8)
