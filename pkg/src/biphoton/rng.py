"""Seeded, portable pseudo-random numbers for the sampling layer.

SplitMix64 in counter mode: output k is ``mix(seed + (k+1) * GAMMA)``,
with the published increment and avalanche constants.  Each output
depends only on (seed, k), so the vectorized generator reproduces the
scalar reference bit for bit, and streams are identical across platforms
(pure 64-bit integer arithmetic; floats come from the top 53 bits).
"""

from __future__ import annotations

import numpy as np

GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a 64-bit integer."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def raw_at(seed: int, k: int) -> int:
    """The k-th (0-based) raw 64-bit output of the stream for ``seed``."""
    if k < 0:
        raise ValueError("stream index must be non-negative")
    return mix64((seed + (k + 1) * GAMMA) & _MASK)


def raw_stream(seed: int, n: int) -> np.ndarray:
    """First n raw outputs for ``seed`` as a uint64 array (wraps mod 2**64)."""
    if n < 0:
        raise ValueError("stream length must be non-negative")
    idx = np.arange(1, n + 1, dtype=np.uint64)
    z = np.uint64(seed & _MASK) + idx * np.uint64(GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def uniforms(seed: int, n: int) -> np.ndarray:
    """n IEEE doubles in [0, 1): the top 53 bits of each output, scaled."""
    return (raw_stream(seed, n) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def substream_seed(seed: int, index: int) -> int:
    """Derive a child seed as raw output ``index`` of the parent stream.

    Used to give every sweep point (and every purpose within a point) its
    own independent, reproducible stream.
    """
    return raw_at(seed, index)
