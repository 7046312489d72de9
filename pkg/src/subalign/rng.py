"""Deterministic stream derivation for reproducible experiments.

Every randomized routine in this package takes a 64-bit seed. Nested work
(grid point i, trial t within it, ...) derives child seeds with `derive`,
a SplitMix64-style finalizer chain:

    child = mix64((parent + (index + 1) * PHI64) mod 2**64)

folded left to right over the index tuple. `mix64` is the SplitMix64 output
finalizer, a bijection on 64-bit words, so child streams are well separated
and the derivation is independent of scheduling: worker counts and execution
order never change which seed a given (point, trial) receives.

Streams themselves are numpy PCG64 generators built from the derived seed.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

#: 2**64 / golden ratio, the SplitMix64 stream increment.
PHI64 = 0x9E3779B97F4A7C15


def mix64(value: int) -> int:
    """SplitMix64 output finalizer (bijective on 64-bit words)."""
    z = value & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive(seed: int, *indices: int) -> int:
    """Derive a child seed from ``seed`` along a path of non-negative indices."""
    s = seed & _MASK64
    for index in indices:
        if index < 0:
            raise ValueError("stream indices must be non-negative")
        s = mix64((s + (index + 1) * PHI64) & _MASK64)
    return s


def generator(seed: int) -> np.random.Generator:
    """A PCG64 generator for the given 64-bit seed."""
    return np.random.Generator(np.random.PCG64(seed & _MASK64))
