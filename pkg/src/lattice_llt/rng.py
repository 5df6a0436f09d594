"""Pinned random streams: numpy's counter-based Philox generator.

A stream is keyed by ``(seed, index)`` through ``SeedSequence``, so path ``i``
of an ensemble draws the same numbers regardless of how many paths run or in
which order they are scheduled.
"""

from __future__ import annotations

import numpy as np

SEED_MASK = (1 << 64) - 1


def make_rng(seed: int, stream: int | None = None) -> np.random.Generator:
    entropy = [seed & SEED_MASK] if stream is None else [seed & SEED_MASK, stream]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))
