"""Seed handling shared by every sampler."""

from __future__ import annotations

from typing import Union

import numpy as np

RngLike = Union[None, int, np.random.SeedSequence, np.random.Generator]


def as_generator(rng: RngLike = None) -> np.random.Generator:
    """Return ``rng`` if it is a Generator, else a fresh PCG64 seeded from it.

    ``None`` means seed 0: samplers are deterministic unless told otherwise.
    """
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(0 if rng is None else rng)


def child_seed(seed: int, index: int) -> np.random.SeedSequence:
    """Seed of sample ``index``; it does not depend on how many samples are drawn."""
    return np.random.SeedSequence(seed, spawn_key=(index,))


def spawn_seeds(seed: int, count: int) -> list[np.random.SeedSequence]:
    return [child_seed(seed, i) for i in range(count)]
