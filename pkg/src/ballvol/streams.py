"""Counter-based random streams for reproducible Monte Carlo.

Every estimator in this package draws from a Philox substream identified
by a 64-bit seed and an integer block counter.  Disjoint blocks give
independent streams, so workers (or successive estimator calls) can share
one seed without overlapping, and any run is reproducible from
(seed, block) alone, independent of platform.
"""

from __future__ import annotations

import numpy as np

# Each block owns 2^64 Philox counter steps; no realistic draw exhausts it.
_BLOCK_STRIDE = 1 << 64

DEFAULT_SEED = 1234567


def substream(seed: int, block: int = 0) -> np.random.Generator:
    """Generator positioned at the start of the given block of the stream."""
    bg = np.random.Philox(key=seed)
    if block:
        bg.advance(block * _BLOCK_STRIDE)
    return np.random.Generator(bg)


def unit_sphere(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    """m uniform points on the sphere S^{n-1}, via normalized Gaussians."""
    x = rng.standard_normal((m, n))
    norms = np.linalg.norm(x, axis=1)
    # zero vectors have probability zero; resample defensively anyway
    bad = norms < 1e-300
    while np.any(bad):
        x[bad] = rng.standard_normal((int(bad.sum()), n))
        norms[bad] = np.linalg.norm(x[bad], axis=1)
        bad = norms < 1e-300
    return x / norms[:, None]
