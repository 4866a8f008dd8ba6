"""Seed-reproducible Monte Carlo estimation of equal-or-better probabilities.

Generator
---------
Everything random in the package is drawn from SplitMix64 (Steele, Lea &
Flood 2014), frozen here so golden values are portable:

    GOLDEN = 0x9E3779B97F4A7C15
    mix(z):  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
             z = (z ^ (z >> 27)) * 0x94D049BB133111EB
             return z ^ (z >> 31)                       (all mod 2**64)

A stream seeded with ``s`` yields ``mix(s + i * GOLDEN)`` for i = 1, 2, ...
Uniforms are ``(word >> 11) * 2**-53`` in [0, 1); a Bernoulli(p) trial
succeeds when the uniform is ``< p``.

Replicate ``i`` under master seed ``m`` uses the stream seeded with
``derive_replicate_seed(m, i) = mix(m + (i + 1) * GOLDEN)``, i.e. the
(i+1)-th output of the master's own stream.  Since each replicate's draws
depend only on (master, i), counts are identical for any chunking or
thread count.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .probability import wilson_interval

GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
MASK64 = (1 << 64) - 1

_U_GOLDEN = np.uint64(GOLDEN)
_U_MIX1 = np.uint64(MIX1)
_U_MIX2 = np.uint64(MIX2)
_TO_UNIT = 2.0**-53

# Replicates are processed in blocks of this size regardless of worker count.
BLOCK = 1 << 14


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def _mix_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _U_MIX1
    z = (z ^ (z >> np.uint64(27))) * _U_MIX2
    return z ^ (z >> np.uint64(31))


def derive_replicate_seed(master: int, index: int) -> int:
    """Stateless 64-bit seed for replicate ``index`` under ``master``."""
    if index < 0:
        raise DomainError("replicate index must be non-negative")
    return _mix((master + (index + 1) * GOLDEN) & MASK64)


def derive_replicate_seeds(master: int, start: int, stop: int) -> np.ndarray:
    """Vectorised :func:`derive_replicate_seed` for indices ``start..stop-1``."""
    idx = np.arange(start + 1, stop + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return _mix_array(np.uint64(master & MASK64) + idx * _U_GOLDEN)


class SplitMix64:
    """Scalar SplitMix64 stream."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return _mix(self.state)

    def random(self) -> float:
        return (self.next_u64() >> 11) * _TO_UNIT


class StreamBlock:
    """Many SplitMix64 streams advanced in lock-step (one per replicate)."""

    def __init__(self, seeds: np.ndarray):
        self.state = np.array(seeds, dtype=np.uint64, copy=True)

    def random(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            self.state += _U_GOLDEN
            word = _mix_array(self.state)
        return (word >> np.uint64(11)).astype(np.float64) * _TO_UNIT


class Comparison(enum.Enum):
    AT_LEAST = ">="
    MORE_THAN = ">"


@dataclass(frozen=True)
class ReplicateModel:
    """``trial_count`` Bernoulli(p) trials; success when the total
    satisfies ``comparison`` against ``success_threshold``."""

    trial_count: int
    p: float
    success_threshold: int
    comparison: Comparison = Comparison.AT_LEAST

    def __post_init__(self):
        if self.trial_count < 0:
            raise DomainError("trial_count must be non-negative")
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"p must lie in [0, 1], got {self.p}")
        if not 0 <= self.success_threshold <= self.trial_count:
            raise DomainError("success_threshold must lie in 0..trial_count")


@dataclass(frozen=True)
class McEstimate:
    point: float
    lower: float
    upper: float
    successes: int
    replicates: int
    master_seed: int
    confidence: float

    @property
    def interval(self) -> tuple[float, float]:
        return self.lower, self.upper


def _count_block(model: ReplicateModel, master: int, start: int, stop: int) -> int:
    streams = StreamBlock(derive_replicate_seeds(master, start, stop))
    wins = np.zeros(stop - start, dtype=np.int64)
    for _ in range(model.trial_count):
        wins += streams.random() < model.p
    if model.comparison is Comparison.AT_LEAST:
        hit = wins >= model.success_threshold
    else:
        hit = wins > model.success_threshold
    return int(np.count_nonzero(hit))


def _blocks(replicates: int):
    for start in range(0, replicates, BLOCK):
        yield start, min(start + BLOCK, replicates)


def map_blocks(func, replicates: int, workers: int = 1):
    """Apply ``func(start, stop)`` over fixed replicate blocks, in order."""
    blocks = list(_blocks(replicates))
    if workers <= 1 or len(blocks) == 1:
        return [func(a, b) for a, b in blocks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda ab: func(*ab), blocks))


def run_replicates(
    model: ReplicateModel, replicates: int, master: int, workers: int = 1
) -> int:
    """Number of replicates whose success total meets the model's threshold."""
    if replicates < 1:
        raise DomainError("replicates must be at least 1")
    counts = map_blocks(
        lambda a, b: _count_block(model, master, a, b), replicates, workers
    )
    return sum(counts)


def estimate_from_count(
    successes: int, replicates: int, master: int, confidence: float
) -> McEstimate:
    lower, upper = wilson_interval(successes, replicates, confidence)
    return McEstimate(
        point=successes / replicates,
        lower=lower,
        upper=upper,
        successes=successes,
        replicates=replicates,
        master_seed=master,
        confidence=confidence,
    )


def estimate_equal_or_better(
    model: ReplicateModel,
    replicates: int,
    master: int,
    confidence: float = 0.95,
    workers: int = 1,
) -> McEstimate:
    """Monte Carlo estimate of the probability that a random strategy does
    at least as well as the model's threshold, with a Wilson interval."""
    if replicates < 100:
        raise DomainError("estimate_equal_or_better needs at least 100 replicates")
    successes = run_replicates(model, replicates, master, workers)
    return estimate_from_count(successes, replicates, master, confidence)

