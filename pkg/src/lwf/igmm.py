"""Iterative moment-matching estimation of transform parameters.

Each iteration, from a robust initialization (median, scaled MAD, gamma = 0):

  1. standardize with the current location/scale and back-transform with the
     current gamma (0 on the first pass, making the first reconstruction the
     data itself);
  2. refresh location/scale from the mean and standard deviation of the
     reconstruction;
  3. refresh gamma so the back-transform under the refreshed standardization
     has zero sample skewness (safeguarded bisection).

Entering the cycle at the back-transform rather than at the gamma refresh is
deliberate: the first mean/sd update sees the raw data, so samples whose
mean or variance does not exist walk the parameters to astronomical values
instead of being quietly tamed by the compressive back-transform.  Iteration
stops when the parameter vector moves less than `tol` in the Euclidean norm,
when `max_iter` is reached, or when location/scale blow past
`divergence_guard` (flagged as Diverged; the final parameters are still
reported so the caller can see how far the run travelled)."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import InputError, ParamError
from .sampling import sample_skewness, values_of
from .transform import InverseReport, LwfParams, Policy, inverse


class Tau(NamedTuple):
    """Raw (mu, sigma, gamma) triple; unlike LwfParams it is not validated,
    because diverged fits legitimately carry astronomical or non-finite values."""

    mu: float
    sigma: float
    gamma: float


class FitStatus(enum.Enum):
    CONVERGED = "converged"
    MAX_ITER = "max_iter"
    DIVERGED = "diverged"


@dataclass(frozen=True)
class IgmmConfig:
    tol: float = 1e-6
    max_iter: int = 100
    gamma_bounds: tuple[float, float] = (-2.0, 2.0)
    gamma_tol: float = 1e-6
    divergence_guard: float = 1e8

    def __post_init__(self):
        if self.tol <= 0 or self.gamma_tol <= 0:
            raise ParamError("tolerances must be > 0")
        if self.max_iter < 1:
            raise ParamError("max_iter must be >= 1")
        lo, hi = self.gamma_bounds
        if not lo < hi:
            raise ParamError("gamma_bounds must be an increasing pair")
        if self.divergence_guard <= 0:
            raise ParamError("divergence_guard must be > 0")


@dataclass(frozen=True)
class FitReport:
    tau_hat: Tau
    iterations: int
    trace: list[Tau] = field(repr=False)
    status: FitStatus = FitStatus.MAX_ITER
    clamped_fraction: float = 0.0


def normal_score(x, mu: float, sigma: float):
    """Location score of a normal density: (x - mu) / sigma^2."""
    if not sigma > 0:
        raise ParamError("normal_score requires sigma > 0")
    arr = np.asarray(x, dtype=float)
    out = (arr - mu) / (sigma * sigma)
    if arr.ndim == 0:
        return float(out)
    return out


def _back_transform(z: np.ndarray, gamma: float) -> InverseReport:
    if gamma == 0.0:
        return InverseReport(values=z, clamped_count=0, clamped_indices=np.empty(0, dtype=int))
    return inverse(z, LwfParams(0.0, 1.0, gamma), Policy.CLAMP)


def _solve_gamma(z: np.ndarray, bounds: tuple[float, float], gtol: float) -> float:
    """Gamma whose back-transform has zero sample skewness.

    Safeguarded root finding: the bracket grows geometrically around 0 until
    the skewness changes sign across it, then bisection takes over.  If no
    sign change exists even across the full bounds, the bound whose
    back-transform is least skewed is returned.
    """
    lo, hi = bounds
    skew_at = lambda g: sample_skewness(_back_transform(z, g).values)
    r = 0.25
    a, b = max(lo, -r), min(hi, r)
    fa, fb = skew_at(a), skew_at(b)
    while fa * fb > 0 and (a > lo or b < hi):
        r *= 2.0
        a, b = max(lo, -r), min(hi, r)
        fa, fb = skew_at(a), skew_at(b)
    if fa * fb > 0:
        return a if abs(fa) <= abs(fb) else b
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    while b - a > gtol:
        mid = 0.5 * (a + b)
        fm = skew_at(mid)
        if fm == 0.0:
            return mid
        if fa * fm < 0:
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    return 0.5 * (a + b)


def fit(y, config: IgmmConfig | None = None) -> FitReport:
    """Estimate (mu, sigma, gamma) from transformed observations."""
    cfg = config or IgmmConfig()
    x = values_of(y)
    if x.ndim != 1 or x.size < 10:
        raise InputError("fit requires a 1-d sample with at least 10 observations")
    if not np.all(np.isfinite(x)):
        raise InputError("fit requires finite observations")
    mu = float(np.median(x))
    sigma = float(np.median(np.abs(x - mu))) * 1.4826
    if sigma <= 0.0:
        raise InputError("fit requires data with nonzero spread")
    gamma = 0.0
    trace = [Tau(mu, sigma, gamma)]
    status = FitStatus.MAX_ITER
    clamped = 0.0
    guard = cfg.divergence_guard
    for _ in range(cfg.max_iter):
        z = (x - mu) / sigma
        rep = _back_transform(z, gamma)
        clamped = rep.clamped_count / x.size
        with np.errstate(over="ignore", invalid="ignore"):
            xhat = rep.values * sigma + mu
            mu_new = float(xhat.mean())
            sigma_new = float(xhat.std())
        finite = np.isfinite(mu_new) and np.isfinite(sigma_new)
        if not finite or sigma_new <= 0.0 or abs(mu_new) > guard or sigma_new > guard:
            # no standardization left to refresh gamma against
            trace.append(Tau(mu_new, sigma_new, gamma))
            mu, sigma = mu_new, sigma_new
            status = FitStatus.DIVERGED
            break
        gamma_new = _solve_gamma((x - mu_new) / sigma_new, cfg.gamma_bounds, cfg.gamma_tol)
        step = math.hypot(mu_new - mu, sigma_new - sigma, gamma_new - gamma)
        mu, sigma, gamma = mu_new, sigma_new, gamma_new
        trace.append(Tau(mu, sigma, gamma))
        if step <= cfg.tol:
            status = FitStatus.CONVERGED
            break
    return FitReport(
        tau_hat=trace[-1],
        iterations=len(trace) - 1,
        trace=trace,
        status=status,
        clamped_fraction=clamped,
    )
