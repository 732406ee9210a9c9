"""Sample DFA and the gap-tolerant modified fluctuation functions.

Windowing is non-overlapping from the left; the tail of length
n mod s is discarded. For order m >= 1 the per-window value is
computed through the pairwise-difference kernel

    F_t^2(s) = -(1/2s) sum_{k,j} w_{k,j} A_{k,j} (x_k - x_j)^2,

with w identically one for gap-free data and w = p * delta delta^T for
the gap-tolerant variant. All three estimators run the identical code
path when no data are missing, so they agree bit for bit there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import WeightMatrix, weight_matrix
from .exceptions import (
    AllPairsMissingError,
    OrderZeroUnsupportedError,
    ScaleExceedsLengthError,
    TooFewPointsError,
)

#: reasons a scale can be undefined in a FluctuationCurve
NEGATIVE_SQUARED = "negative-squared-value"
NO_VALID_PAIRS = "no-valid-pairs"


@dataclass(frozen=True)
class GappedSeries:
    """Regularly sampled values with a per-point availability mask."""

    values: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        mask = np.asarray(self.mask, dtype=bool)
        if values.shape != mask.shape or values.ndim != 1:
            raise ValueError("values and mask must be 1-d and equally long")
        if not mask.any():
            raise ValueError("at least one value must be present")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "mask", mask)
        values.setflags(write=False)
        mask.setflags(write=False)

    @classmethod
    def from_values(cls, values) -> "GappedSeries":
        """Treat NaN entries as missing."""
        values = np.asarray(values, dtype=float)
        return cls(values=values, mask=~np.isnan(values))

    @property
    def gap_free(self) -> bool:
        return bool(self.mask.all())


@dataclass(frozen=True)
class GapWeights:
    """Pair weights p_{k,j} = (# windows) / (# windows with both present)."""

    scale: int
    p: np.ndarray
    defined: np.ndarray
    n_windows: int

    def __post_init__(self):
        self.p.setflags(write=False)
        self.defined.setflags(write=False)


@dataclass(frozen=True)
class FluctuationCurve:
    """F(s) over a scale grid, with per-scale diagnostics.

    f2 retains raw (possibly negative) squared values; ``defined``
    flags the usable scales and ``reasons`` says why the others are
    not.
    """

    scales: np.ndarray
    f2: np.ndarray
    n_windows: np.ndarray
    estimator: str
    reasons: tuple[str | None, ...]

    def __post_init__(self):
        self.scales.setflags(write=False)
        self.f2.setflags(write=False)
        self.n_windows.setflags(write=False)

    @property
    def defined(self) -> np.ndarray:
        return np.array([r is None for r in self.reasons])

    @property
    def f(self) -> np.ndarray:
        out = np.full(self.f2.shape, np.nan)
        ok = self.defined
        out[ok] = np.sqrt(self.f2[ok])
        return out


@dataclass(frozen=True)
class HurstFit:
    """OLS fit of log F(s) against log s."""

    hurst: float
    intercept: float
    s_min: int
    s_max: int
    n_points: int
    residual_std: float


def default_scale_grid(n: int, m: int, count: int = 30) -> np.ndarray:
    """About ``count`` log-spaced integer scales in [m+2, n//4]."""
    lo = m + 2
    if lo > n:
        raise ScaleExceedsLengthError(
            f"series of length {n} cannot hold the minimum scale {lo}"
        )
    hi = max(n // 4, lo)
    grid = np.unique(np.round(np.geomspace(lo, hi, count)).astype(int))
    return grid[(grid >= lo) & (grid <= hi)]


def _check_scales(n: int, m: int, scales: np.ndarray) -> None:
    if scales.size == 0:
        raise ValueError("empty scale grid")
    if int(scales.max()) > n:
        raise ScaleExceedsLengthError(
            f"scale {int(scales.max())} exceeds series length {n}"
        )


def _windows(x: np.ndarray, s: int) -> np.ndarray:
    """Left-anchored non-overlapping windows; the tail is discarded."""
    w = x.shape[0] // s
    return x[: w * s].reshape(w, s)


def _increment_f2_per_window(xw: np.ndarray, a: np.ndarray,
                             w: np.ndarray) -> np.ndarray:
    """-(1/2s) sum w A (x_k - x_j)^2 for each window row of xw."""
    s = xw.shape[1]
    d2 = (xw[:, :, None] - xw[:, None, :]) ** 2
    return -np.einsum("kj,wkj->w", w * a, d2) / (2 * s)


def _product_f2_per_window(xw: np.ndarray, a: np.ndarray,
                           w: np.ndarray) -> np.ndarray:
    """(1/s) sum w A x_k x_j for each window row of xw."""
    s = xw.shape[1]
    outer = xw[:, :, None] * xw[:, None, :]
    return np.einsum("kj,wkj->w", w * a, outer) / s


def _quadratic_f2_per_window(xw: np.ndarray, a: np.ndarray) -> np.ndarray:
    s = xw.shape[1]
    return np.einsum("wk,kj,wj->w", xw, a, xw) / s


def _standard_window_f2(xw: np.ndarray, a: WeightMatrix) -> np.ndarray:
    ones = np.ones((a.scale, a.scale))
    if a.order >= 1:
        return _increment_f2_per_window(xw, a.entries, ones)
    return _quadratic_f2_per_window(xw, a.entries)


def dfa(series, m: int, scales) -> FluctuationCurve:
    """Standard DFA fluctuation curve on gap-free data."""
    x = np.asarray(series, dtype=float)
    scales = np.asarray(scales, dtype=int)
    _check_scales(x.shape[0], m, scales)
    f2 = np.empty(scales.shape)
    nw = np.empty(scales.shape, dtype=int)
    for i, s in enumerate(scales):
        a = weight_matrix(m, int(s))
        xw = _windows(x, int(s))
        vals = _standard_window_f2(xw, a)
        f2[i] = vals.mean()
        nw[i] = xw.shape[0]
    return FluctuationCurve(scales=scales, f2=f2, n_windows=nw,
                            estimator="standard",
                            reasons=tuple([None] * scales.size))


def gap_weights(mask, s: int, count_empty_windows: bool = True) -> GapWeights:
    """Per-scale pair weights from the availability mask.

    The numerator counts all retained windows (optionally excluding
    windows with no present point at all); the denominator counts, per
    pair (k, j), the windows where both points are present. Pairs
    present in no window are marked undefined and get weight 0 — the
    availability factors already remove them from every sum.
    """
    mask = np.asarray(mask, dtype=bool)
    dw = _windows(mask, s).astype(float)
    if dw.shape[0] == 0:
        raise ScaleExceedsLengthError(f"scale {s} exceeds mask length")
    counts = np.einsum("wk,wj->kj", dw, dw)
    n_win = dw.shape[0]
    if not count_empty_windows:
        n_win = int(dw.any(axis=1).sum())
    defined = counts > 0
    if not defined.any():
        raise AllPairsMissingError(
            f"no pair is present in any window at scale {s}"
        )
    p = np.zeros((s, s))
    p[defined] = n_win / counts[defined]
    return GapWeights(scale=s, p=p, defined=defined, n_windows=n_win)


def _gap_curve(gs: GappedSeries, m: int, scales, kernel: str,
               count_empty_windows: bool) -> FluctuationCurve:
    scales = np.asarray(scales, dtype=int)
    _check_scales(gs.values.shape[0], m, scales)
    x = np.where(gs.mask, gs.values, 0.0)
    f2 = np.full(scales.shape, np.nan)
    nw = np.zeros(scales.shape, dtype=int)
    reasons: list[str | None] = []
    for i, s in enumerate(scales):
        a = weight_matrix(m, int(s))
        xw = _windows(x, int(s))
        nw[i] = xw.shape[0]
        if gs.gap_free:
            # identical code path (and bit pattern) as standard DFA
            vals = _standard_window_f2(xw, a)
        else:
            try:
                gw = gap_weights(gs.mask, int(s), count_empty_windows)
            except AllPairsMissingError:
                reasons.append(NO_VALID_PAIRS)
                continue
            dw = _windows(gs.mask, int(s)).astype(float)
            avail = dw[:, :, None] * dw[:, None, :]
            pa = gw.p * a.entries
            if kernel == "increment":
                d2 = (xw[:, :, None] - xw[:, None, :]) ** 2
                vals = -np.einsum("kj,wkj->w", pa, d2 * avail) / (2 * int(s))
            else:
                outer = xw[:, :, None] * xw[:, None, :]
                vals = np.einsum("kj,wkj->w", pa, outer * avail) / int(s)
        f2[i] = vals.mean()
        reasons.append(NEGATIVE_SQUARED if f2[i] < 0 else None)
    tag = "f_hat" if kernel == "increment" else "f_tilde"
    return FluctuationCurve(scales=scales, f2=f2, n_windows=nw,
                            estimator=tag, reasons=tuple(reasons))


def f_hat(gs: GappedSeries, m: int, scales,
          count_empty_windows: bool = True) -> FluctuationCurve:
    """Gap-tolerant fluctuation function built on the difference kernel.

    Unbiased (relative to gap-free DFA) for stationary and for
    stationary-increment input. Scales where the reweighted sum turns
    negative are flagged undefined; the raw value is kept in f2.
    """
    if m < 1:
        raise OrderZeroUnsupportedError(
            "difference-kernel estimator needs order >= 1"
        )
    return _gap_curve(gs, m, scales, "increment", count_empty_windows)


def f_tilde(gs: GappedSeries, m: int, scales,
            count_empty_windows: bool = True) -> FluctuationCurve:
    """Gap-tolerant fluctuation function built on the product kernel.

    Unbiased for stationary input only; for stationary-increment
    (nonstationary) input the window-offset-dependent part no longer
    cancels and the estimator is biased.
    """
    return _gap_curve(gs, m, scales, "product", count_empty_windows)


def estimate_hurst(curve: FluctuationCurve,
                   fit_range: tuple[int, int] | None = None) -> HurstFit:
    """Slope of log F(s) against log s over the defined scales in range."""
    if fit_range is None:
        s_min, s_max = int(curve.scales.min()), int(curve.scales.max())
    else:
        s_min, s_max = int(fit_range[0]), int(fit_range[1])
    sel = curve.defined & (curve.scales >= s_min) & (curve.scales <= s_max)
    if sel.sum() < 3:
        raise TooFewPointsError(
            f"need >= 3 defined scales in [{s_min}, {s_max}], "
            f"have {int(sel.sum())}"
        )
    logs = np.log(curve.scales[sel].astype(float))
    logf = 0.5 * np.log(curve.f2[sel])
    slope, intercept = np.polyfit(logs, logf, 1)
    resid = logf - (slope * logs + intercept)
    return HurstFit(hurst=float(slope), intercept=float(intercept),
                    s_min=s_min, s_max=s_max, n_points=int(sel.sum()),
                    residual_std=float(resid.std(ddof=2) if sel.sum() > 2
                                       else 0.0))
