"""Seeding conventions shared by every simulation in the package.

Generator: numpy ``PCG64`` (128-bit state), wrapped in ``numpy.random.Generator``.
Normal variates come from ``Generator.standard_normal`` (numpy's ziggurat); the
numba kernels call the same methods on the same object, so jitted and
interpreted code draw identical streams.

Replicate substreams: the seed of replicate ``i`` under master seed ``s`` is the
``i``-th output of a SplitMix64 sequence started at ``s``, i.e. the SplitMix64
finalizer applied to ``s + (i + 1) * 0x9E3779B97F4A7C15 (mod 2**64)``. Each
replicate seed is a pure function of ``(s, i)``, so replicates can be computed in
any order or in isolation.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """SplitMix64 output finalizer (Steele, Lea & Flood 2014)."""
    z = x & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def substream_seed(master_seed: int, index: int) -> int:
    if index < 0:
        raise ValueError("replicate index must be non-negative")
    return splitmix64((master_seed + (index + 1) * GOLDEN_GAMMA) & MASK64)


def make_rng(seed) -> np.random.Generator:
    """Generator for ``seed``; an existing Generator is passed through."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(int(seed) & MASK64))
