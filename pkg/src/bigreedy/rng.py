"""Seeded random sources.

Every stochastic component draws from a Philox counter-based bit generator,
whose stream for a given integer seed is fixed across platforms and numpy
versions (numpy's stream-compatibility policy covers Philox).
"""
import numpy as np


def make_rng(seed) -> np.random.Generator:
    """Return a Philox-backed generator; passes generators through unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        return np.random.Generator(np.random.Philox())
    return np.random.Generator(np.random.Philox(int(seed)))
