"""Deterministic, seedable random source shared by the kernel, models and drivers.

Generator: CPython's ``random.Random`` (MT19937, period 2**19937 - 1), seeded from a
64-bit integer. Integer seeding and ``randrange`` are stable across CPython releases,
so a (seed, call sequence) pair reproduces the same stream on every platform.

Sub-streams: ``fork(i)`` derives the child seed with SplitMix64 (Steele, Lea, Flood 2014)
applied to ``seed + (i + 1) * GOLDEN_GAMMA``::

    z = (x + 0x9E3779B97F4A7C15) mod 2**64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2**64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2**64
    z =  z ^ (z >> 31)

Distributions:

- ``uniform_int(n)``: ``randrange(n)``, which draws ``n.bit_length()`` random bits and
  rejects values >= n (no modulo bias).
- ``bernoulli(p)``: ``u < p`` with u uniform in [0, 1).
- ``exponential(mean)``: ``-mean * ln(1 - u)`` with u clamped to [0, 1 - 2**-53].
"""

import math
import random

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MAX_UNIFORM = 1.0 - 2.0**-53
DEFAULT_SEED = 20150101


class InvalidArgumentError(ValueError):
    """A distribution parameter is outside its domain."""

    pass


def splitmix64(x: int) -> int:
    """
    Apply one SplitMix64 output step to a 64-bit state.

    Args:
        x: 64-bit input state

    Returns:
        Mixed 64-bit output
    """
    z = (x + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """
    Derive the deterministic sub-seed of stream ``index`` from a master seed.

    Args:
        seed: Master 64-bit seed
        index: Non-negative stream index

    Returns:
        64-bit sub-seed
    """
    if index < 0:
        raise InvalidArgumentError(f"stream index must be non-negative, got {index}")
    return splitmix64((seed + (index + 1) * GOLDEN_GAMMA) & MASK64)


def inverse_exponential(u: float, mean: float) -> float:
    """
    Map a uniform variate to an exponential one by inverting the CDF.

    Args:
        u: Uniform variate in [0, 1); values above 1 - 2**-53 are clamped
        mean: Mean of the distribution (> 0)

    Returns:
        Non-negative, finite sample
    """
    if not mean > 0:
        raise InvalidArgumentError(f"exponential mean must be > 0, got {mean}")
    u = min(max(u, 0.0), MAX_UNIFORM)
    return -mean * math.log1p(-u)


class RandomSource:
    """Single-owner seeded pseudo-random stream."""

    __slots__ = ("seed", "_gen")

    def __init__(self, seed: int = DEFAULT_SEED) -> None:
        """
        Initialize the stream.

        Args:
            seed: 64-bit unsigned seed
        """
        if seed < 0 or seed > MASK64:
            raise InvalidArgumentError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed
        self._gen = random.Random(seed)

    def fork(self, index: int) -> "RandomSource":
        """
        Create an independent child stream.

        The child depends only on this source's seed and ``index``, never on how much of
        this stream has been consumed.

        Args:
            index: Stream index

        Returns:
            New RandomSource
        """
        return RandomSource(derive_seed(self.seed, index))

    def uniform(self) -> float:
        """Draw u uniformly from [0, 1)."""
        return self._gen.random()

    def uniform_int(self, n: int) -> int:
        """
        Draw an integer uniformly from [0, n-1].

        Args:
            n: Range size (>= 1)

        Returns:
            Integer in [0, n-1]

        Raises:
            InvalidArgumentError: If n < 1
        """
        if n < 1:
            raise InvalidArgumentError(f"uniform_int range must be >= 1, got {n}")
        return self._gen.randrange(n)

    def bernoulli(self, p: float) -> bool:
        """
        Draw a Bernoulli(p) outcome.

        Args:
            p: Success probability in [0, 1]

        Returns:
            True with probability p

        Raises:
            InvalidArgumentError: If p is outside [0, 1]
        """
        if not 0.0 <= p <= 1.0:
            raise InvalidArgumentError(f"bernoulli probability must be in [0, 1], got {p}")
        return self._gen.random() < p

    def exponential(self, mean: float) -> float:
        """
        Draw from the negative exponential distribution with the given mean.

        Args:
            mean: Mean (> 0)

        Returns:
            Non-negative finite sample

        Raises:
            InvalidArgumentError: If mean <= 0
        """
        if not mean > 0:
            raise InvalidArgumentError(f"exponential mean must be > 0, got {mean}")
        return inverse_exponential(self._gen.random(), mean)

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed})"
