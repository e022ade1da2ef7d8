import math

import numpy as np
import pytest

from conftest import tone
from oracles import sampen_direct, sampen_direct_value
from radarhr._kernels_numba import sampen_pair_counts as counts_numba
from radarhr._kernels_numpy import sampen_pair_counts as counts_numpy
from radarhr.errors import DegenerateInputError, InvalidArgumentError
from radarhr.objective import SampEnConfig, sample_entropy


def shuffled_ramp_period(period, reps, seed=0):
    """Strictly periodic series whose base values are >= 1 apart, so only
    exact-lag template matches can fall inside r = 0.2 std."""
    rng = np.random.default_rng(seed)
    base = rng.permutation(period).astype(np.float64)
    return np.tile(base, reps)


class TestExamples:
    def test_strictly_periodic_series_has_zero_entropy(self):
        x = shuffled_ramp_period(10, 30)
        assert sample_entropy(x, SampEnConfig(embedding_m=2, tolerance_r=0.2)) == 0.0

    def test_noise_above_sinusoid_for_twenty_seeds(self):
        sine = tone(1.2, 10.0, 100.0)
        se_sine = sample_entropy(sine)
        wins = 0
        for seed in range(20):
            noise = np.random.default_rng(seed).standard_normal(1000)
            if sample_entropy(noise) > se_sine:
                wins += 1
        assert wins == 20

    def test_too_short_series_rejected(self):
        with pytest.raises(InvalidArgumentError):
            sample_entropy(np.arange(3.0), SampEnConfig(embedding_m=2))


class TestOracleEquivalence:
    def test_matches_direct_definition_exactly(self):
        rng = np.random.default_rng(123)
        cfg = SampEnConfig(embedding_m=2, tolerance_r=0.2)
        for trial in range(100):
            n = int(rng.integers(10, 301))
            kind = trial % 3
            if kind == 0:
                x = rng.standard_normal(n)
            elif kind == 1:
                x = np.sin(2 * np.pi * rng.uniform(0.5, 3.0)
                           * np.arange(n) / 100.0) + 0.1 * rng.standard_normal(n)
            else:
                x = np.cumsum(rng.standard_normal(n))
            got = sample_entropy(x, cfg)
            expected = sampen_direct_value(x, m=2, r_ratio=0.2)
            assert got == pytest.approx(expected, rel=1e-12, abs=0.0)

    def test_kernel_paths_identical_counts(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            n = int(rng.integers(30, 400))
            x = rng.standard_normal(n)
            r = 0.2 * x.std()
            for m in (1, 2, 3):
                assert tuple(counts_numba(x, m, r)) == tuple(counts_numpy(x, m, r)) \
                    == sampen_direct(x, m, r)

    def test_higher_embedding_against_oracle(self):
        rng = np.random.default_rng(9)
        x = rng.standard_normal(200)
        cfg = SampEnConfig(embedding_m=3, tolerance_r=0.15)
        a, b = sampen_direct(x, 3, 0.15 * x.std())
        assert sample_entropy(x, cfg) == pytest.approx(-math.log(a / b), rel=1e-12)


class TestProperties:
    def test_scale_invariance(self):
        rng = np.random.default_rng(21)
        x = rng.standard_normal(500)
        base = sample_entropy(x)
        for a in (2.0, 0.25, -4.0, 3.0, -0.1):
            assert sample_entropy(a * x) == pytest.approx(base, rel=1e-9)

    def test_non_negative(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            x = rng.standard_normal(int(rng.integers(20, 500)))
            assert sample_entropy(x) >= 0.0

    def test_a_zero_sentinel(self):
        # repeated (0, 0) pairs match at length 2 but their extensions are
        # all distinct multiples of 10sigma, so A = 0
        blocks = [np.array([0.0, 0.0, float(10 * (i + 1))]) for i in range(6)]
        x = np.concatenate(blocks)
        cfg = SampEnConfig(embedding_m=2, tolerance_r=0.01)
        a, b = sampen_direct(x, 2, 0.01 * x.std())
        assert a == 0 and b > 0
        expected = math.log(b) + math.log(x.size - 2)
        assert sample_entropy(x, cfg) == pytest.approx(expected, rel=1e-12)

    def test_b_zero_sentinel(self):
        # first-coordinate gaps are all >= 2 while r = 1e-6 std << 1
        x = 3.0 ** np.arange(12)
        cfg = SampEnConfig(embedding_m=2, tolerance_r=1e-6)
        a, b = sampen_direct(x, 2, 1e-6 * x.std())
        assert b == 0
        nt = x.size - 2
        assert sample_entropy(x, cfg) == pytest.approx(
            math.log(nt) + math.log(nt - 1), rel=1e-12)


class TestErrors:
    def test_constant_series_degenerate(self):
        with pytest.raises(DegenerateInputError):
            sample_entropy(np.ones(100))

    def test_non_finite_rejected(self):
        x = np.ones(50)
        x[3] = np.inf
        with pytest.raises(InvalidArgumentError):
            sample_entropy(x + np.arange(50))

    def test_bad_config_rejected(self):
        with pytest.raises(InvalidArgumentError):
            SampEnConfig(embedding_m=0)
        with pytest.raises(InvalidArgumentError):
            SampEnConfig(tolerance_r=0.0)
