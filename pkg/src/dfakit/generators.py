"""Deterministic synthesis of test signals.

Fractional Gaussian noise is generated by circulant embedding
(Davies-Harte), which reproduces the target autocovariance exactly at
every lag; if the embedding has negative eigenvalues the generator
falls back to a Cholesky factorisation of the n x n covariance (capped
at n = 8192). Random streams come from the counter-based Philox
generator keyed by (seed, replicate), so ensembles are reproducible
under any parallel schedule.
"""

from __future__ import annotations

import numpy as np

from .estimators import GappedSeries
from .exceptions import EmbeddingError
from .models import fgn_acvf

_CHOLESKY_MAX_N = 8192


def _rng(seed: int, replicate: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed, replicate]))


def _circulant_eigenvalues(gamma: np.ndarray, gamma_n: float) -> np.ndarray:
    """Eigenvalues of the 2n-circulant embedding of an acvf gamma(0..n-1)."""
    c = np.concatenate([gamma, [gamma_n], gamma[:0:-1]])
    return np.fft.fft(c).real


def gen_fgn(hurst: float, variance: float, n: int, seed: int,
            replicate: int = 0) -> np.ndarray:
    """Exact Gaussian sample with the fractional-noise autocovariance."""
    if n < 2:
        raise ValueError("length must be >= 2")
    gamma = np.asarray(fgn_acvf(hurst, variance, np.arange(n)))
    lam = _circulant_eigenvalues(gamma, float(fgn_acvf(hurst, variance, n)))
    rng = _rng(seed, replicate)
    if lam.min() >= 0:
        m = 2 * n
        z = np.empty(m, dtype=complex)
        z[0] = rng.standard_normal()
        z[n] = rng.standard_normal()
        v = rng.standard_normal((n - 1, 2))
        z[1:n] = (v[:, 0] + 1j * v[:, 1]) / np.sqrt(2)
        z[n + 1:] = np.conj(z[1:n][::-1])
        return np.sqrt(m) * np.fft.ifft(np.sqrt(lam) * z).real[:n]
    if n > _CHOLESKY_MAX_N:
        raise EmbeddingError(
            f"circulant embedding not nonnegative and n={n} exceeds the "
            f"Cholesky fallback cap {_CHOLESKY_MAX_N}"
        )
    cov = np.asarray(fgn_acvf(hurst, variance,
                              np.abs(np.subtract.outer(np.arange(n),
                                                       np.arange(n)))))
    chol = np.linalg.cholesky(cov)
    return chol @ rng.standard_normal(n)


def gen_fbm(hurst: float, variance: float, n: int, seed: int,
            replicate: int = 0) -> np.ndarray:
    """Motion sample as the running sum of gen_fgn with exponent H - 1.

    Returns X(1..n) with the convention X(0) = 0, so the increments of
    the output are exactly the generated noise stream.
    """
    if not 1.0 < hurst < 2.0:
        raise ValueError(f"Hurst exponent must lie in (1, 2), got {hurst}")
    return np.cumsum(gen_fgn(hurst - 1.0, variance, n, seed, replicate))


def gen_ar1(phi: float, gamma0: float, n: int, seed: int,
            replicate: int = 0) -> np.ndarray:
    """Stationary AR(1) sample with acvf gamma0 * phi^k."""
    if not -1.0 < phi < 1.0:
        raise ValueError("AR(1) coefficient must lie in (-1, 1)")
    if gamma0 <= 0:
        raise ValueError("stationary variance must be > 0")
    if n < 2:
        raise ValueError("length must be >= 2")
    rng = _rng(seed, replicate)
    eps = rng.standard_normal(n)
    x = np.empty(n)
    x[0] = np.sqrt(gamma0) * eps[0]
    innov_sd = np.sqrt(gamma0 * (1.0 - phi * phi))
    for t in range(1, n):
        x[t] = phi * x[t - 1] + innov_sd * eps[t]
    return x


def gen_white(gamma0: float, n: int, seed: int, replicate: int = 0) -> np.ndarray:
    """I.i.d. Gaussian noise with variance gamma0."""
    if gamma0 <= 0:
        raise ValueError("variance must be > 0")
    return np.sqrt(gamma0) * _rng(seed, replicate).standard_normal(n)


def add_polynomial_trend(series, coefficients) -> np.ndarray:
    """Add beta_0 + beta_1 t + ... evaluated at t = 1..n to the series."""
    x = np.asarray(series, dtype=float)
    beta = np.asarray(coefficients, dtype=float)
    t = np.arange(1, x.shape[0] + 1, dtype=float)
    trend = np.polynomial.polynomial.polyval(t, beta)
    return x + trend


def block_gap_mask(n: int, missing_fraction: float, mean_block_length: float,
                   seed: int, replicate: int = 0) -> np.ndarray:
    """Availability mask with geometrically distributed gap blocks.

    Missing runs have the given mean length; present runs are sized so
    the expected missing fraction matches the target.
    """
    if not 0.0 < missing_fraction < 1.0:
        raise ValueError("missing fraction must lie in (0, 1)")
    if mean_block_length < 1.0:
        raise ValueError("mean block length must be >= 1")
    rng = _rng(seed, replicate)
    mean_present = mean_block_length * (1.0 - missing_fraction) / missing_fraction
    mask = np.empty(n, dtype=bool)
    pos = 0
    missing = rng.random() < missing_fraction
    while pos < n:
        mean = mean_block_length if missing else mean_present
        run = rng.geometric(min(1.0, 1.0 / mean))
        mask[pos: pos + run] = not missing
        pos += run
        missing = not missing
    return mask


def apply_gap_mask(series, mask) -> GappedSeries:
    """Attach an availability mask to a series."""
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise ValueError("mask removes every point")
    return GappedSeries(values=np.asarray(series, dtype=float), mask=mask)
