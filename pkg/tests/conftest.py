"""Shared helpers: random barrier generation used across test modules."""

import os
import sys

import numpy as np

sys.path.insert(0, os.path.dirname(__file__))

from stairwell.potential import PiecewiseConstantPotential


def random_localized_barrier(
    rng, max_interfaces: int = 100, level_lo: float = -50.0, level_hi: float = 80.0
) -> PiecewiseConstantPotential:
    """Random profile with zero-level leads and bounded interior levels."""
    n = int(rng.integers(2, max_interfaces + 1))
    x = np.cumsum(rng.uniform(0.05, 1.0, n)) + rng.uniform(-5.0, 5.0)
    inner = rng.uniform(level_lo, level_hi, n - 1)
    v = np.concatenate([[0.0], inner, [0.0]])
    return PiecewiseConstantPotential(x, v)
