"""Tests for the signal generators and gap-mask synthesis."""

import numpy as np
import pytest

from dfakit.exceptions import EmbeddingError
from dfakit.generators import (
    add_polynomial_trend,
    apply_gap_mask,
    block_gap_mask,
    gen_ar1,
    gen_fbm,
    gen_fgn,
    gen_white,
)
from dfakit.models import fgn_acvf


def sample_acvf(x, lag):
    n = x.size
    return float(np.dot(x[: n - lag], x[lag:]) / n)


class TestDeterminism:
    def test_same_key_same_stream(self):
        a = gen_fgn(0.7, 1.0, 512, seed=42, replicate=3)
        b = gen_fgn(0.7, 1.0, 512, seed=42, replicate=3)
        assert np.array_equal(a, b)

    def test_replicates_differ(self):
        a = gen_fgn(0.7, 1.0, 512, seed=42, replicate=0)
        b = gen_fgn(0.7, 1.0, 512, seed=42, replicate=1)
        assert not np.array_equal(a, b)

    def test_seeds_differ(self):
        a = gen_white(1.0, 64, seed=1)
        b = gen_white(1.0, 64, seed=2)
        assert not np.array_equal(a, b)


class TestFgn:
    def test_half_is_white(self):
        # H = 1/2 noise is uncorrelated: lag-1 sample acvf ~ N(0, 1/n)
        x = gen_fgn(0.5, 1.0, 2**16, seed=7)
        se = 1.0 / np.sqrt(x.size)
        assert abs(sample_acvf(x, 1)) < 4 * se
        assert sample_acvf(x, 0) == pytest.approx(1.0, abs=5 * se)

    def test_sample_acvf_matches_target(self):
        # pooled over replicates: each lag within 3 combined SEs
        h, n, reps = 0.7, 4096, 40
        lags = np.arange(6)
        target = np.asarray(fgn_acvf(h, 1.0, lags))
        est = np.array([
            [sample_acvf(gen_fgn(h, 1.0, n, seed=1234, replicate=r), k)
             for k in lags]
            for r in range(reps)
        ])
        z = (est.mean(axis=0) - target) / (est.std(axis=0, ddof=1)
                                           / np.sqrt(reps))
        assert np.abs(z).max() < 3.5

    def test_embedding_covariance_is_exact(self):
        # the circulant spectrum must return the acvf under the inverse
        # transform, which is what makes the synthesis distributionally
        # exact
        from dfakit.generators import _circulant_eigenvalues
        n = 257
        gamma = np.asarray(fgn_acvf(0.8, 1.0, np.arange(n)))
        lam = _circulant_eigenvalues(gamma, float(fgn_acvf(0.8, 1.0, n)))
        assert lam.min() >= 0
        back = np.fft.ifft(lam).real[:n]
        assert np.abs(back - gamma).max() < 1e-10

    def test_variance_scaling(self):
        a = gen_fgn(0.6, 1.0, 256, seed=5)
        b = gen_fgn(0.6, 4.0, 256, seed=5)
        assert np.allclose(b, 2.0 * a, rtol=1e-12)

    def test_rejects_short(self):
        with pytest.raises(ValueError):
            gen_fgn(0.7, 1.0, 1, seed=0)


class TestFbm:
    def test_duality_with_noise(self):
        h = 1.3
        incr = gen_fgn(h - 1.0, 1.0, 300, seed=9, replicate=2)
        path = gen_fbm(h, 1.0, 300, seed=9, replicate=2)
        assert np.array_equal(path, np.cumsum(incr))

    def test_starts_near_zero(self):
        # X(1) equals the first increment, not an accumulated offset
        path = gen_fbm(1.5, 1.0, 100, seed=3)
        incr = gen_fgn(0.5, 1.0, 100, seed=3)
        assert path[0] == incr[0]

    def test_brownian_msd(self):
        # mean squared displacement of standard Brownian motion is t
        reps = 200
        t = 64
        vals = [gen_fbm(1.5, 1.0, t, seed=77, replicate=r)[-1] ** 2
                for r in range(reps)]
        se = np.std(vals, ddof=1) / np.sqrt(reps)
        assert np.mean(vals) == pytest.approx(t, abs=4 * se)

    def test_domain(self):
        with pytest.raises(ValueError):
            gen_fbm(0.7, 1.0, 100, seed=0)


class TestAr1:
    def test_lag1_correlation(self):
        phi, n = 0.6, 2**16
        x = gen_ar1(phi, 2.0, n, seed=21)
        assert sample_acvf(x, 1) / sample_acvf(x, 0) == pytest.approx(
            phi, abs=0.02)

    def test_stationary_variance(self):
        x = gen_ar1(0.9, 3.0, 2**15, seed=22)
        assert sample_acvf(x, 0) == pytest.approx(3.0, rel=0.2)

    def test_domain(self):
        with pytest.raises(ValueError):
            gen_ar1(1.0, 1.0, 100, seed=0)
        with pytest.raises(ValueError):
            gen_ar1(0.5, -1.0, 100, seed=0)


class TestTrend:
    def test_constant(self):
        x = np.zeros(5)
        assert np.array_equal(add_polynomial_trend(x, [2.0]), np.full(5, 2.0))

    def test_linear_at_t_equals_one(self):
        y = add_polynomial_trend(np.zeros(3), [1.0, 2.0])
        assert np.allclose(y, [3.0, 5.0, 7.0])

    def test_additive(self):
        rng = np.random.default_rng(0)
        x = rng.normal(size=50)
        y = add_polynomial_trend(x, [0.5, 0.1, 0.01])
        assert np.allclose(y - x, add_polynomial_trend(np.zeros(50),
                                                       [0.5, 0.1, 0.01]))


class TestBlockGapMask:
    def test_deterministic(self):
        a = block_gap_mask(1000, 0.2, 12.0, seed=99)
        b = block_gap_mask(1000, 0.2, 12.0, seed=99)
        assert np.array_equal(a, b)

    def test_fraction_close_on_average(self):
        fracs = [1.0 - block_gap_mask(4000, 0.2, 12.0, seed=s).mean()
                 for s in range(100)]
        assert np.mean(fracs) == pytest.approx(0.2, abs=0.05)

    def test_blocks_not_isolated_points(self):
        mask = block_gap_mask(20000, 0.3, 10.0, seed=5)
        gaps = np.diff(np.concatenate([[1], mask.astype(int), [1]]))
        starts, ends = np.where(gaps == -1)[0], np.where(gaps == 1)[0]
        runs = ends - starts
        assert runs.mean() > 4.0  # geometric mean length 10 target

    def test_domain(self):
        with pytest.raises(ValueError):
            block_gap_mask(100, 0.0, 5.0, seed=0)
        with pytest.raises(ValueError):
            block_gap_mask(100, 0.5, 0.5, seed=0)


class TestApplyGapMask:
    def test_roundtrip(self):
        x = gen_white(1.0, 50, seed=1)
        mask = block_gap_mask(50, 0.3, 3.0, seed=2)
        gs = apply_gap_mask(x, mask)
        assert np.array_equal(gs.values, x)
        assert np.array_equal(gs.mask, mask)

    def test_empty_mask_rejected(self):
        with pytest.raises(ValueError):
            apply_gap_mask(np.ones(4), np.zeros(4, bool))
