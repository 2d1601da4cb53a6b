"""Seeded probe-point protocol for the identity suites.

Identity checks sample a fixed seeded set of points in [-1, 1]^4 unless a
scenario overrides count or box; everything downstream is deterministic in
the seed.
"""

from __future__ import annotations

import numpy as np

DEFAULT_SEED = 2718
DEFAULT_COUNT = 20

__all__ = ["DEFAULT_SEED", "DEFAULT_COUNT", "probe_points", "probe_rng"]


def probe_rng(seed: int = DEFAULT_SEED) -> np.random.Generator:
    return np.random.default_rng(seed)


def probe_points(
    seed: int = DEFAULT_SEED, count: int = DEFAULT_COUNT, box: float = 1.0
) -> np.ndarray:
    """Return a (count, 4) array of probe points, uniform in [-box, box]^4."""
    rng = probe_rng(seed)
    return rng.uniform(-box, box, size=(count, 4))
