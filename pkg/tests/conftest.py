import itertools

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def brute_force_R(M, r):
    """Average over all N^r basis-vector sequences of the final minimum."""
    M = np.asarray(M, dtype=float)
    N = M.size
    if r == 0:
        return float(M.min())
    total = 0.0
    for seq in itertools.product(range(N), repeat=r):
        total += (M + np.bincount(seq, minlength=N)).min()
    return total / N**r


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
