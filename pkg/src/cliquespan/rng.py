"""Seeded random streams.

Every random draw in the package goes through :func:`stream`, which keys a
Philox-4x64 counter-based generator with ``SeedSequence(seed, spawn_key=path)``.
Philox output depends only on (key, counter), so a given ``(seed, path)`` pair
yields the same bits on every platform, and distinct paths give independent
streams without coordination (the "splittable" part).
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1


def stream(seed: int, *path: int | str) -> np.random.Generator:
    key = tuple(_path_word(p) for p in path)
    ss = np.random.SeedSequence(entropy=int(seed) & MASK64, spawn_key=key)
    return np.random.Generator(np.random.Philox(ss))


def _path_word(p: int | str) -> int:
    if isinstance(p, str):
        # stable across runs, unlike hash()
        h = 0xCBF29CE484222325
        for b in p.encode():
            h = ((h ^ b) * 0x100000001B3) & MASK64
        return h
    return int(p) & MASK64
