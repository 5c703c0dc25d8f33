"""Distribution specs, seeded draws, and elementary sample statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DegenerateError, DomainError, ParamError, RangeError


@dataclass(frozen=True)
class Sample:
    """A drawn sample plus the provenance needed to reproduce it."""

    values: np.ndarray
    label: str = ""
    seed: int | None = None


def values_of(x) -> np.ndarray:
    """Return the float array behind a Sample, array, or sequence."""
    if isinstance(x, Sample):
        return np.asarray(x.values, dtype=float)
    return np.asarray(x, dtype=float)


def _require(cond: bool, what: str):
    if not cond:
        raise ParamError(what)


@dataclass(frozen=True)
class Normal:
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        _require(np.isfinite(self.mu), "Normal mu must be finite")
        _require(self.sigma > 0, "Normal sigma must be > 0")


@dataclass(frozen=True)
class StudentT:
    nu: float

    def __post_init__(self):
        _require(self.nu > 0, "StudentT nu must be > 0")


@dataclass(frozen=True)
class Pareto:
    alpha: float
    x_min: float = 1.0

    def __post_init__(self):
        _require(self.alpha > 0, "Pareto alpha must be > 0")
        _require(self.x_min > 0, "Pareto x_min must be > 0")


@dataclass(frozen=True)
class Exponential:
    rate: float = 1.0

    def __post_init__(self):
        _require(self.rate > 0, "Exponential rate must be > 0")


@dataclass(frozen=True)
class Weibull:
    shape: float
    scale: float = 1.0

    def __post_init__(self):
        _require(self.shape > 0, "Weibull shape must be > 0")
        _require(self.scale > 0, "Weibull scale must be > 0")


@dataclass(frozen=True)
class SkewedT:
    """Two-piece skewed Student-t; gamma_star < 1 skews left, > 1 right."""

    nu: float
    gamma_star: float

    def __post_init__(self):
        _require(self.nu > 0, "SkewedT nu must be > 0")
        _require(self.gamma_star > 0, "SkewedT gamma_star must be > 0")


@dataclass(frozen=True)
class SkewNormal:
    """Skew-normal with location xi, scale omega, slant alpha."""

    xi: float
    omega: float
    alpha: float

    def __post_init__(self):
        _require(np.isfinite(self.xi), "SkewNormal xi must be finite")
        _require(self.omega > 0, "SkewNormal omega must be > 0")
        _require(np.isfinite(self.alpha), "SkewNormal alpha must be finite")


DistSpec = Union[Normal, StudentT, Pareto, Exponential, Weibull, SkewedT, SkewNormal]


def student_t_values(rng: np.random.Generator, nu: float, n: int) -> np.ndarray:
    """Student-t draws as a normal over a scaled chi-square root; exact for any nu > 0."""
    z = rng.standard_normal(n)
    v = rng.chisquare(nu, n)
    return z / np.sqrt(v / nu)


def _draw_values(spec: DistSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    if isinstance(spec, Normal):
        return rng.normal(spec.mu, spec.sigma, n)
    if isinstance(spec, StudentT):
        return student_t_values(rng, spec.nu, n)
    if isinstance(spec, Pareto):
        # inverse CDF keeps the support strictly above x_min
        u = rng.random(n)
        return spec.x_min * (1.0 - u) ** (-1.0 / spec.alpha)
    if isinstance(spec, Exponential):
        return rng.exponential(1.0 / spec.rate, n)
    if isinstance(spec, Weibull):
        return spec.scale * rng.weibull(spec.shape, n)
    if isinstance(spec, SkewedT):
        t = student_t_values(rng, spec.nu, n)
        u = rng.random(n)
        g = spec.gamma_star
        right = u < g * g / (1.0 + g * g)
        return np.where(right, g * np.abs(t), -np.abs(t) / g)
    if isinstance(spec, SkewNormal):
        d = spec.alpha / np.sqrt(1.0 + spec.alpha**2)
        z0 = rng.standard_normal(n)
        z1 = rng.standard_normal(n)
        return spec.xi + spec.omega * (d * np.abs(z0) + np.sqrt(1.0 - d * d) * z1)
    raise ParamError(f"unknown distribution spec {spec!r}")


def draw(spec: DistSpec, n: int, seed=None) -> Sample:
    """Draw n values from a spec.

    seed may be an int, a SeedSequence, a Generator, or None (fresh entropy).
    The same (spec, n, seed) triple always reproduces the same values.
    """
    if n < 1:
        raise ParamError("draw requires n >= 1")
    if isinstance(seed, np.random.Generator):
        rng = seed
        seed_label = None
    else:
        rng = np.random.default_rng(seed)
        seed_label = seed if isinstance(seed, int) else None
    values = _draw_values(spec, int(n), rng)
    return Sample(values=values, label=repr(spec), seed=seed_label)


@dataclass(frozen=True)
class Moments:
    mean: float
    sd: float
    skewness: float
    excess_kurtosis: float


def moments(s) -> Moments:
    """Mean, sd, skewness, excess kurtosis with divide-by-n central moments."""
    x = values_of(s)
    if x.size < 2:
        raise DegenerateError("moments require at least 2 observations")
    m = float(x.mean())
    c = x - m
    m2 = float(np.mean(c * c))
    if m2 == 0.0:
        raise DegenerateError("moments undefined: all observations equal")
    m3 = float(np.mean(c**3))
    m4 = float(np.mean(c**4))
    return Moments(
        mean=m,
        sd=float(np.sqrt(m2)),
        skewness=m3 / m2**1.5,
        excess_kurtosis=m4 / m2**2 - 3.0,
    )


def sample_skewness(x: np.ndarray) -> float:
    """Divide-by-n skewness of a plain array; 0 for zero-spread input.

    Deviations are rescaled by their largest magnitude before the moment
    ratio (skewness is scale-invariant), so samples with entries near the
    float ceiling do not overflow the cube.
    """
    c = x - x.mean()
    scale = float(np.max(np.abs(c))) if c.size else 0.0
    if scale == 0.0:
        return 0.0
    if not np.isfinite(scale):
        return math.nan
    c = c / scale
    m2 = float(np.mean(c * c))
    if m2 == 0.0:
        return 0.0
    return float(np.mean(c**3)) / m2**1.5


def harmonic_mean(s) -> float:
    x = values_of(s)
    if x.size == 0:
        raise DomainError("harmonic mean of an empty sample")
    if not np.all(x > 0):
        raise DomainError("harmonic mean requires strictly positive values")
    return float(x.size / np.sum(1.0 / x))


@dataclass(frozen=True)
class AcfResult:
    """Autocorrelations r_1..r_max_lag plus the +-1.96/sqrt(n) band."""

    values: np.ndarray
    band: float
    n: int

    def flagged(self) -> np.ndarray:
        return np.abs(self.values) > self.band


def acf(s, max_lag: int) -> AcfResult:
    """Sample autocorrelation at lags 1..max_lag (biased normalization)."""
    x = values_of(s)
    n = x.size
    if not 1 <= max_lag < n:
        raise RangeError(f"max_lag must be in [1, {n - 1}], got {max_lag}")
    c = x - x.mean()
    denom = float(np.sum(c * c))
    if denom == 0.0:
        raise DegenerateError("acf undefined: series has zero variance")
    vals = np.empty(max_lag)
    for k in range(1, max_lag + 1):
        vals[k - 1] = float(np.sum(c[:-k] * c[k:])) / denom
    return AcfResult(values=vals, band=1.96 / np.sqrt(n), n=n)
