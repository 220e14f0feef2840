import itertools

import numpy as np
import pytest


def exhaustive_sums(items):
    """All 2^n subset sums by direct enumeration (object dtype, no shared code)."""
    sums = np.zeros(1, dtype=object)
    for w in items:
        sums = np.concatenate([sums, sums + int(w)])
    return sums


def exhaustive_has_solution(items, t):
    return bool(np.any(exhaustive_sums(items) == t))


def brute_4tuples(families):
    return itertools.product(*[range(len(f)) for f in families])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
