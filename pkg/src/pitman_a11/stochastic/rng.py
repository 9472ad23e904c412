"""Reproducible random streams: one counter-based Philox generator per (seed, stream id)."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

DEFAULT_SEED_ENV = "PITMAN_A11_SEED"


def default_seed() -> int:
    return int(os.environ.get(DEFAULT_SEED_ENV, "20240601"))


@dataclass
class RngStream:
    """Draws for stream ``stream_id`` under master ``seed``.

    Distinct stream ids get independent Philox keys through SeedSequence
    spawning, so replicas can be run in any order or in parallel.
    """

    seed: int
    stream_id: int = 0
    gen: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        self.gen = np.random.Generator(np.random.Philox(ss))

    def spawn(self, stream_id: int) -> "RngStream":
        """Another stream under the same seed (ids are global, not nested)."""
        return RngStream(self.seed, stream_id)

    def uniform(self, size=None):
        return self.gen.random(size)

    def exponential(self, size=None):
        # inversion, so every platform maps the same uniforms to the same draws
        return -np.log1p(-self.gen.random(size))

    def normal(self, size=None):
        return self.gen.standard_normal(size)

    def integers(self, low, high=None, size=None):
        return self.gen.integers(low, high, size)
