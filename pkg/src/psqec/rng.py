"""Counter-based random streams built on the splitmix64 mixer.

Every random decision in a simulation is addressed by (seed, run, step,
location, draw).  Hashing the address instead of advancing shared state
makes runs reproducible bit-for-bit regardless of how run ids are
partitioned across workers, and lets the numba and numpy execution paths
produce identical fault patterns.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(x: int) -> int:
    """splitmix64 finalizer: one 64-bit avalanche step."""
    x &= MASK64
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 & MASK64
    x = (x ^ (x >> 27)) * 0x94D049BB133111EB & MASK64
    return x ^ (x >> 31)


def counter_u64(seed: int, run: int, step: int, loc: int, draw: int = 0) -> int:
    """Deterministic 64-bit value for one addressed decision."""
    x = mix64((seed + GOLDEN * (run + 1)) & MASK64)
    x = mix64((x + GOLDEN * (step + 1)) & MASK64)
    x = mix64((x + GOLDEN * (loc + 1)) & MASK64)
    if draw:
        x = mix64((x + GOLDEN * draw) & MASK64)
    return x


def mix64_vec(x: np.ndarray) -> np.ndarray:
    """Vectorized splitmix64 finalizer over a uint64 array."""
    with np.errstate(over="ignore"):
        x = x.astype(np.uint64, copy=True)
        x ^= x >> np.uint64(30)
        x *= np.uint64(0xBF58476D1CE4E5B9)
        x ^= x >> np.uint64(27)
        x *= np.uint64(0x94D049BB133111EB)
        x ^= x >> np.uint64(31)
    return x


def counter_u64_vec(seed: int, runs: np.ndarray, step: int, loc: int, draw: int = 0) -> np.ndarray:
    """Vectorized counter_u64 over an array of run ids."""
    with np.errstate(over="ignore"):
        g = np.uint64(GOLDEN)
        x = mix64_vec(np.uint64(seed) + g * (runs.astype(np.uint64) + np.uint64(1)))
        x = mix64_vec(x + g * np.uint64(step + 1))
        x = mix64_vec(x + g * np.uint64(loc + 1))
        if draw:
            x = mix64_vec(x + g * np.uint64(draw))
    return x


def threshold(p: float) -> int:
    """Integer threshold so that (u < threshold) fires with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {p}")
    if p >= 1.0:
        return MASK64
    return int(p * 2.0**64)


class CounterRng:
    """Stateful view of a counter stream for one (seed, run) pair.

    Used by the reference noise samplers; the simulation kernels address
    the same stream directly.
    """

    def __init__(self, seed: int, run: int = 0):
        self.seed = seed
        self.run = run
        self.step = 0
        self.loc = 0

    def at(self, step: int, loc: int) -> "CounterRng":
        self.step = step
        self.loc = loc
        return self

    def u64(self, draw: int = 0) -> int:
        return counter_u64(self.seed, self.run, self.step, self.loc, draw)

    def uniform(self, draw: int = 0) -> float:
        return self.u64(draw) / 2.0**64
