"""
Reproducible random number streams.

A `RandomStream` is addressed by a master seed and a tuple of integer ids. The
ids become the spawn key of a NumPy `SeedSequence`, so a stream always yields
the same draws no matter which other streams were consumed before it, or on
which thread.
"""

import numpy as np
from numpy.typing import NDArray
from typing import Optional, Tuple, Union

# Top-level stream ids, one per consumer
CANDIDATE_STREAM = 0
TTLS_STREAM = 1
RTS_STREAM = 2
NOISE_STREAM = 3

SEED_MASK = (1 << 64) - 1


class RandomStream:
    def __init__(self, seed: int, key: Tuple[int, ...] = ()) -> None:
        if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
            raise TypeError(f"Seed must be an integer, got {seed!r}")
        self.seed: int = int(seed) & SEED_MASK
        self.key: Tuple[int, ...] = tuple(int(k) for k in key)
        # Number of variates handed out so far
        self.counter: int = 0
        self._generator = np.random.default_rng(
            np.random.SeedSequence(entropy=self.seed, spawn_key=self.key)
        )

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed}, key={self.key}, counter={self.counter})"

    def child(self, *ids: int) -> "RandomStream":
        """
        Independent stream one level below this one. Consuming the child does
        not advance the parent.
        """
        return RandomStream(self.seed, self.key + tuple(ids))

    def quantiles(self, size: Optional[int] = None) -> Union[float, NDArray]:
        """
        Uniform quantiles in [0, 1).
        """
        self.counter += 1 if size is None else int(size)
        return self._generator.random(size)

    def normal(self, sigma: float, size: Optional[int] = None) -> Union[float, NDArray]:
        self.counter += 1 if size is None else int(size)
        return self._generator.normal(0.0, sigma, size)

    def poisson(self, lam: float) -> int:
        self.counter += 1
        return int(self._generator.poisson(lam))

    def coin(self) -> bool:
        return bool(self.quantiles() < 0.5)
