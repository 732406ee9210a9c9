"""Second-order correlation structures of the supported input processes.

Stationary processes are described by an autocovariance model (white
noise, fractional Gaussian noise, Ornstein-Uhlenbeck / AR(1), or an
explicit table); stationary-increment nonstationary processes by a
variogram model (fractional Brownian motion or a table). Lags are
integers throughout: everything downstream works on regularly sampled
series.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import InsufficientLagsError


def _check_hurst_stationary(h: float) -> None:
    if not 0.0 < h < 1.0:
        raise ValueError(f"Hurst exponent must lie in (0, 1), got {h}")


def _check_hurst_motion(h: float) -> None:
    if not 1.0 < h < 2.0:
        raise ValueError(f"Hurst exponent must lie in (1, 2), got {h}")


def fgn_acvf(hurst: float, variance: float, lag) -> np.ndarray | float:
    """Autocovariance of fractional Gaussian noise.

    gamma(tau) = (variance / 2) (|tau+1|^{2H} - 2 |tau|^{2H} + |tau-1|^{2H});
    the second central difference of t -> variance * t^{2H} / 2.
    """
    _check_hurst_stationary(hurst)
    tau = np.abs(np.asarray(lag, dtype=float))
    two_h = 2.0 * hurst
    out = 0.5 * variance * (
        np.abs(tau + 1) ** two_h - 2 * tau**two_h + np.abs(tau - 1) ** two_h
    )
    return out if out.ndim else float(out)


def fgn_acvf_asymptotic(hurst: float, variance: float, lag) -> np.ndarray | float:
    """Power-law tail variance * H(2H-1) tau^{2H-2}; undefined at H = 1/2."""
    _check_hurst_stationary(hurst)
    if hurst == 0.5:
        raise ValueError("asymptotic acvf is degenerate at H = 1/2")
    tau = np.asarray(lag, dtype=float)
    if np.any(tau < 1):
        raise ValueError("asymptotic form needs lag >= 1")
    out = variance * hurst * (2 * hurst - 1) * tau ** (2 * hurst - 2)
    return out if out.ndim else float(out)


def fbm_covariance(h: float, variance: float, t, s) -> np.ndarray | float:
    """Covariance of a stationary-increment motion with increment exponent h.

    E X(t) X(s) = (variance / 2) (|s|^{2h} + |t|^{2h} - |t-s|^{2h}),
    normalised so E X(1)^2 = variance.
    """
    _check_hurst_stationary(h)
    tt = np.asarray(t, dtype=float)
    ss = np.asarray(s, dtype=float)
    if np.any(tt < 0) or np.any(ss < 0):
        raise ValueError("times must be >= 0")
    two_h = 2.0 * h
    out = 0.5 * variance * (
        np.abs(ss) ** two_h + np.abs(tt) ** two_h - np.abs(tt - ss) ** two_h
    )
    return out if out.ndim else float(out)


def fbm_variogram(hurst: float, variance: float, lag) -> np.ndarray | float:
    """Structure function S(t) = variance * t^{2(H-1)} for H in (1, 2)."""
    _check_hurst_motion(hurst)
    t = np.asarray(lag, dtype=float)
    if np.any(t < 0):
        raise ValueError("lag must be >= 0")
    out = variance * t ** (2.0 * (hurst - 1.0))
    return out if out.ndim else float(out)


def ou_acvf(tau_c: float, gamma0: float, lag) -> np.ndarray | float:
    """Exponential autocovariance gamma0 * exp(-lag / tau_c).

    Parameterised by the stationary variance gamma0 directly rather
    than a Langevin noise amplitude; only the acvf shape matters to
    every consumer in this package.
    """
    if tau_c <= 0:
        raise ValueError("correlation time must be > 0")
    if gamma0 <= 0:
        raise ValueError("stationary variance must be > 0")
    t = np.abs(np.asarray(lag, dtype=float))
    out = gamma0 * np.exp(-t / tau_c)
    return out if out.ndim else float(out)


def ar1_acvf(phi: float, gamma0: float, lag) -> np.ndarray | float:
    """AR(1) autocovariance gamma0 * phi^|lag| (discretised OU process)."""
    if not -1.0 < phi < 1.0:
        raise ValueError("AR(1) coefficient must lie in (-1, 1)")
    if gamma0 <= 0:
        raise ValueError("stationary variance must be > 0")
    t = np.abs(np.asarray(lag, dtype=float))
    out = gamma0 * phi**t
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class HurstParams:
    """Hurst exponent H in (0,1) or (1,2) and the increment exponent h.

    h equals H for stationary processes and H - 1 for stationary-
    increment motions; H = 1 is excluded.
    """

    hurst: float
    h: float = field(init=False)

    def __post_init__(self):
        if not (0.0 < self.hurst < 1.0 or 1.0 < self.hurst < 2.0):
            raise ValueError(
                f"Hurst exponent must lie in (0,1) or (1,2), got {self.hurst}"
            )
        object.__setattr__(
            self, "h", self.hurst - 1.0 if self.hurst > 1.0 else self.hurst
        )

    @property
    def stationary(self) -> bool:
        return self.hurst < 1.0


# --- model objects ---------------------------------------------------------


@dataclass(frozen=True)
class WhiteNoise:
    gamma0: float = 1.0

    def __post_init__(self):
        if self.gamma0 <= 0:
            raise ValueError("gamma0 must be > 0")

    def acvf(self, lags) -> np.ndarray:
        t = np.asarray(lags, dtype=float)
        return np.where(t == 0, self.gamma0, 0.0)


@dataclass(frozen=True)
class FGN:
    hurst: float
    variance: float = 1.0

    def __post_init__(self):
        _check_hurst_stationary(self.hurst)
        if self.variance <= 0:
            raise ValueError("variance must be > 0")

    def acvf(self, lags) -> np.ndarray:
        return np.asarray(fgn_acvf(self.hurst, self.variance, lags))


@dataclass(frozen=True)
class OU:
    tau_c: float
    gamma0: float = 1.0

    def __post_init__(self):
        if self.tau_c <= 0 or self.gamma0 <= 0:
            raise ValueError("tau_c and gamma0 must be > 0")

    def acvf(self, lags) -> np.ndarray:
        return np.asarray(ou_acvf(self.tau_c, self.gamma0, lags))


@dataclass(frozen=True)
class AR1:
    phi: float
    gamma0: float = 1.0

    def __post_init__(self):
        if not -1.0 < self.phi < 1.0:
            raise ValueError("phi must lie in (-1, 1)")
        if self.gamma0 <= 0:
            raise ValueError("gamma0 must be > 0")

    def acvf(self, lags) -> np.ndarray:
        return np.asarray(ar1_acvf(self.phi, self.gamma0, lags))


@dataclass(frozen=True)
class AcvfTable:
    """Explicit gamma(0..L); errors rather than extrapolates past L."""

    values: tuple[float, ...]

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.size == 0 or v[0] <= 0:
            raise ValueError("table needs gamma(0) > 0")
        if np.any(np.abs(v) > v[0] * (1 + 1e-12)):
            raise ValueError("|gamma(tau)| must not exceed gamma(0)")
        object.__setattr__(self, "values", tuple(float(x) for x in v))

    def acvf(self, lags) -> np.ndarray:
        t = np.asarray(lags)
        if np.any(t >= len(self.values)):
            raise InsufficientLagsError(
                f"table covers lags 0..{len(self.values) - 1}, "
                f"need up to {int(np.max(t))}"
            )
        return np.asarray(self.values, dtype=float)[t]


@dataclass(frozen=True)
class FBM:
    hurst: float
    variance: float = 1.0

    def __post_init__(self):
        _check_hurst_motion(self.hurst)
        if self.variance <= 0:
            raise ValueError("variance must be > 0")

    def variogram(self, lags) -> np.ndarray:
        return np.asarray(fbm_variogram(self.hurst, self.variance, lags))

    def covariance(self, t, s) -> np.ndarray | float:
        return fbm_covariance(self.hurst - 1.0, self.variance, t, s)


@dataclass(frozen=True)
class VariogramTable:
    """Explicit S(0..L) with S(0) = 0."""

    values: tuple[float, ...]

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.size == 0 or v[0] != 0:
            raise ValueError("table needs S(0) = 0")
        object.__setattr__(self, "values", tuple(float(x) for x in v))

    def variogram(self, lags) -> np.ndarray:
        t = np.asarray(lags)
        if np.any(t >= len(self.values)):
            raise InsufficientLagsError(
                f"table covers lags 0..{len(self.values) - 1}, "
                f"need up to {int(np.max(t))}"
            )
        return np.asarray(self.values, dtype=float)[t]


AcvfModel = WhiteNoise | FGN | OU | AR1 | AcvfTable
VariogramModel = FBM | VariogramTable


@dataclass(frozen=True)
class DerivedVariogram:
    """Variogram S(t) = 2 (gamma(0) - gamma(t)) of a stationary model."""

    model: AcvfModel

    def variogram(self, lags) -> np.ndarray:
        t = np.asarray(lags)
        g0 = float(self.model.acvf(np.asarray(0)))
        return 2.0 * (g0 - self.model.acvf(t))


def stationary_to_variogram(model: AcvfModel, lag) -> np.ndarray | float:
    """S(t) = 2 gamma(0) - 2 gamma(t); bridges the two expectation engines."""
    out = DerivedVariogram(model).variogram(np.asarray(lag))
    return out if out.ndim else float(out)


def model_from_spec(spec: dict):
    """Build a model object from its JSON description.

    Recognised kinds: white, fgn, fbm, ou, ar1, table (with "acvf" or
    "variogram" values).
    """
    kind = spec.get("kind")
    params = {k: v for k, v in spec.items() if k != "kind"}
    if kind == "white":
        return WhiteNoise(**params)
    if kind == "fgn":
        return FGN(**params)
    if kind == "fbm":
        return FBM(**params)
    if kind == "ou":
        return OU(**params)
    if kind == "ar1":
        return AR1(**params)
    if kind == "table":
        if "acvf" in params:
            return AcvfTable(values=tuple(params["acvf"]))
        if "variogram" in params:
            return VariogramTable(values=tuple(params["variogram"]))
        raise ValueError('table model needs "acvf" or "variogram" values')
    raise ValueError(f"unknown model kind {kind!r}")
