"""Deterministic, splittable random streams.

Every stochastic routine derives its generator from a master seed plus
a structured key (e.g. ("eta", 3) or ("spin", 7)), backed by the
counter-based Philox generator. The same (seed, key) always yields the
same stream, independent of call order or thread count.
"""

from __future__ import annotations

import zlib

import numpy as np

from isingcode.gf2 import BitVector


def _key_words(key) -> list[int]:
    words = []
    for part in key:
        if isinstance(part, str):
            words.append(zlib.crc32(part.encode("utf-8")))
        elif isinstance(part, (int, np.integer)):
            words.append(int(part) & 0xFFFFFFFF)
            words.append((int(part) >> 32) & 0xFFFFFFFF)
        else:
            raise TypeError(f"stream key parts must be str or int, got {type(part)}")
    return words


def stream(seed: int, *key) -> np.random.Generator:
    """Independent generator for (seed, key)."""
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF] + _key_words(key)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def bernoulli_bitvector(length: int, p: float, rng: np.random.Generator) -> BitVector:
    """Independent Bernoulli(p) bits packed into a BitVector."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    draws = rng.random(length) < p
    mask = 0
    for i in np.flatnonzero(draws):
        mask |= 1 << int(i)
    return BitVector(length, mask)
