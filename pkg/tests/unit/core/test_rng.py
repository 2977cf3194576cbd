"""Tests for the seeded random source."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from smcheck.core.rng import (
    MASK64,
    InvalidArgumentError,
    RandomSource,
    derive_seed,
    inverse_exponential,
    splitmix64,
)


class TestSplitMix:
    """Tests for seed derivation."""

    def test_splitmix64_reference_value(self) -> None:
        """Test the first output of SplitMix64 from state 0."""
        assert splitmix64(0) == 0xE220A8397B1DCDAF

    def test_derive_seed_is_deterministic(self) -> None:
        """Test that the same (seed, index) always gives the same sub-seed."""
        assert derive_seed(42, 3) == derive_seed(42, 3)

    def test_derive_seed_streams_differ(self) -> None:
        """Test that distinct indices give distinct sub-seeds."""
        seeds = {derive_seed(20150101, i) for i in range(1000)}
        assert len(seeds) == 1000

    def test_derive_seed_rejects_negative_index(self) -> None:
        """Test that a negative stream index is rejected."""
        with pytest.raises(InvalidArgumentError):
            derive_seed(1, -1)

    @given(st.integers(min_value=0, max_value=MASK64), st.integers(min_value=0, max_value=10_000))
    def test_derive_seed_stays_64_bit(self, seed: int, index: int) -> None:
        """Test that derived seeds are valid 64-bit seeds."""
        assert 0 <= derive_seed(seed, index) <= MASK64


class TestRandomSource:
    """Tests for RandomSource."""

    def test_same_seed_same_stream(self) -> None:
        """Test reproducibility from a seed."""
        a = RandomSource(7)
        b = RandomSource(7)
        assert [a.uniform_int(100) for _ in range(50)] == [b.uniform_int(100) for _ in range(50)]

    def test_fork_independent_of_consumption(self) -> None:
        """Test that a child stream does not depend on how much the parent was used."""
        fresh = RandomSource(7)
        used = RandomSource(7)
        for _ in range(100):
            used.uniform()
        assert fresh.fork(2).seed == used.fork(2).seed
        assert fresh.fork(2).uniform() == used.fork(2).uniform()

    def test_fork_children_differ(self) -> None:
        """Test that sibling streams have different seeds."""
        source = RandomSource(7)
        assert source.fork(0).seed != source.fork(1).seed

    def test_rejects_out_of_range_seed(self) -> None:
        """Test that seeds outside 64 bits are rejected."""
        with pytest.raises(InvalidArgumentError):
            RandomSource(-1)
        with pytest.raises(InvalidArgumentError):
            RandomSource(MASK64 + 1)

    def test_uniform_int_range(self) -> None:
        """Test that uniform_int stays within [0, n-1] and hits every value."""
        source = RandomSource(1)
        draws = [source.uniform_int(6) for _ in range(3000)]
        assert set(draws) == set(range(6))

    def test_uniform_int_chi_square(self) -> None:
        """Test that uniform_int(10) frequencies pass a chi-square goodness-of-fit test."""
        source = RandomSource(2015)
        counts = np.bincount([source.uniform_int(10) for _ in range(50_000)], minlength=10)
        expected = 50_000 / 10
        statistic = float(((counts - expected) ** 2 / expected).sum())
        # 99.9th percentile of chi-square with 9 degrees of freedom
        assert statistic < 27.877

    def test_uniform_int_of_one_is_zero(self) -> None:
        """Test the degenerate single-value range."""
        source = RandomSource(1)
        assert all(source.uniform_int(1) == 0 for _ in range(20))

    def test_uniform_int_rejects_empty_range(self) -> None:
        """Test that n < 1 is rejected."""
        with pytest.raises(InvalidArgumentError):
            RandomSource(1).uniform_int(0)

    def test_bernoulli_extremes(self) -> None:
        """Test that p=0 never succeeds and p=1 always succeeds."""
        source = RandomSource(3)
        assert not any(source.bernoulli(0.0) for _ in range(200))
        assert all(source.bernoulli(1.0) for _ in range(200))

    def test_bernoulli_frequency(self) -> None:
        """Test that the success frequency is close to p."""
        source = RandomSource(3)
        hits = sum(source.bernoulli(0.3) for _ in range(20_000))
        assert abs(hits / 20_000 - 0.3) < 0.02

    @pytest.mark.parametrize("p", [-0.1, 1.5])
    def test_bernoulli_rejects_bad_probability(self, p: float) -> None:
        """Test that probabilities outside [0, 1] are rejected."""
        with pytest.raises(InvalidArgumentError):
            RandomSource(3).bernoulli(p)

    def test_exponential_mean(self) -> None:
        """Test that the sample mean is close to the requested mean."""
        source = RandomSource(11)
        samples = [source.exponential(5.0) for _ in range(20_000)]
        assert all(s >= 0 for s in samples)
        assert abs(sum(samples) / len(samples) - 5.0) < 0.25

    def test_exponential_is_memoryless(self) -> None:
        """Test that P(X > s + t | X > s) matches P(X > t)."""
        source = RandomSource(17)
        samples = np.array([source.exponential(5.0) for _ in range(50_000)])
        survivors = samples[samples > 3.0]
        conditional = float((survivors > 7.0).mean())
        unconditional = float((samples > 4.0).mean())

        assert len(survivors) > 20_000
        assert conditional == pytest.approx(unconditional, abs=0.02)
        assert conditional == pytest.approx(math.exp(-4.0 / 5.0), abs=0.015)

    def test_exponential_rejects_non_positive_mean(self) -> None:
        """Test that mean <= 0 is rejected."""
        with pytest.raises(InvalidArgumentError):
            RandomSource(11).exponential(0.0)


class TestInverseExponential:
    """Tests for the inverse-CDF transform."""

    def test_zero_maps_to_zero(self) -> None:
        assert inverse_exponential(0.0, 3.0) == 0.0

    def test_clamps_at_one(self) -> None:
        """Test that u = 1 gives a finite sample."""
        assert math.isfinite(inverse_exponential(1.0, 3.0))

    def test_median(self) -> None:
        """Test that u = 1/2 maps to mean * ln 2."""
        assert inverse_exponential(0.5, 2.0) == pytest.approx(2.0 * math.log(2))
