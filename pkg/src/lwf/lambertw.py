"""Real branches of the Lambert W function and the G_u divergence kernel.

W(z) solves w * exp(w) = z.  Two real branches exist: the principal branch
(values >= -1, defined on [-1/e, inf)) and the non-principal branch
(values <= -1, defined on [-1/e, 0)).  Evaluation combines branch-specific
starting approximations with Halley refinement; in a narrow window around
the branch point z = -1/e the series in sqrt(2*(e*z + 1)) is used directly
because Halley's denominator degenerates there.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import DomainError, ParamError

_NEG_INV_E = -math.exp(-1.0)
# arguments this far below -1/e are treated as the branch point itself
_BRANCH_SLACK = 1e-14
# below this p = sqrt(2*(e*z + 1)) the series alone is already exact to double precision
_SERIES_ONLY = 1e-5


class Branch(enum.Enum):
    PRINCIPAL = "principal"
    NON_PRINCIPAL = "non_principal"


def _branch_series(p):
    # W = -1 + p - p^2/3 + 11 p^3/72 - 43 p^4/540 + 769 p^5/17280 + O(p^6),
    # with p = +sqrt(2*(e*z+1)) on the principal side and -sqrt(...) on the other
    c5 = 769.0 / 17280.0
    c4 = -43.0 / 540.0
    c3 = 11.0 / 72.0
    c2 = -1.0 / 3.0
    return -1.0 + p * (1.0 + p * (c2 + p * (c3 + p * (c4 + p * c5))))


def _halley(w, z, max_iter=100):
    for _ in range(max_iter):
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            ew = np.exp(w)
            f = w * ew - z
            wp1 = w + 1.0
            denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
            step = f / denom
        step = np.where(np.isfinite(step), step, 0.0)
        w = w - step
        if np.all(np.abs(step) <= 7e-17 * (2.0 + np.abs(w))):
            break
    return w


def _w_principal(z):
    w = np.empty_like(z)
    p = np.sqrt(np.maximum(2.0 * (np.e * z + 1.0), 0.0))
    near = p < _SERIES_ONLY
    w[near] = _branch_series(p[near])
    rest = ~near
    if np.any(rest):
        zr = z[rest]
        pr = p[rest]
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            l1 = np.log(np.where(zr > 0, zr, 1.0))
            log_start = l1 - np.log(np.where(l1 > 0, l1, 1.0))
            # the series overflows on the large-z lanes the where() discards
            start = np.where(
                zr <= -0.2,
                _branch_series(pr),
                np.where(zr <= 1.132, pr - 1.0, log_start),
            )
        w[rest] = _halley(start, zr)
    return w


def _w_non_principal(z):
    w = np.empty_like(z)
    p = np.sqrt(np.maximum(2.0 * (np.e * z + 1.0), 0.0))
    near = p < _SERIES_ONLY
    w[near] = _branch_series(-p[near])
    rest = ~near
    if np.any(rest):
        zr = z[rest]
        ln_nz = np.log(-zr)
        l2 = np.log(-ln_nz)
        start = np.where(
            zr <= -0.25,
            _branch_series(-p[rest]),
            ln_nz - l2 + l2 / ln_nz,
        )
        # the log-space fixed point w = ln(-z) - ln(-w) contracts on the whole
        # branch and cannot leave it, so it is a safe polish before Halley
        wr = start
        for _ in range(8):
            wr = ln_nz - np.log(-wr)
        deep = wr < -690.0
        if np.any(deep):
            # exp(w) underflows there; the fixed point alone is already
            # converged far past double precision
            wd = wr[deep]
            for _ in range(4):
                wd = ln_nz[deep] - np.log(-wd)
            wr[deep] = wd
        shallow = ~deep
        if np.any(shallow):
            wr[shallow] = _halley(wr[shallow], zr[shallow])
        w[rest] = wr
    return w


def lambert_w(z, branch: Branch = Branch.PRINCIPAL):
    """Evaluate a real branch of the Lambert W function.

    Accepts a scalar or array.  Arguments within 1e-14 below -1/e are
    treated as the branch point; anything lower raises DomainError, as does
    a non-negative argument on the non-principal branch.
    """
    if not isinstance(branch, Branch):
        raise ParamError(f"branch must be a Branch member, got {branch!r}")
    arr = np.asarray(z, dtype=float)
    scalar = arr.ndim == 0
    flat = np.atleast_1d(arr).astype(float).copy()
    if not np.all(np.isfinite(flat)):
        raise DomainError("lambert_w requires finite arguments")
    slack = (flat < _NEG_INV_E) & (flat >= _NEG_INV_E - _BRANCH_SLACK)
    flat[slack] = _NEG_INV_E
    if np.any(flat < _NEG_INV_E):
        worst = float(flat.min())
        raise DomainError(f"argument {worst!r} lies below -1/e")
    if branch is Branch.PRINCIPAL:
        out = _w_principal(flat)
    else:
        if np.any(flat >= 0.0):
            raise DomainError("non-principal branch is defined only for z < 0")
        out = _w_non_principal(flat)
    if scalar:
        return float(out[0])
    return out.reshape(arr.shape)


def g_u(x, u):
    """The convex kernel x - u*ln(x), minimized at x = u with value u - u*ln(u)."""
    if not (np.isscalar(u) and u > 0):
        raise DomainError("g_u requires a scalar u > 0")
    arr = np.asarray(x, dtype=float)
    if not np.all(arr > 0):
        raise DomainError("g_u requires x > 0")
    out = arr - u * np.log(arr)
    if arr.ndim == 0:
        return float(out)
    return out


def g_u_relation_check(x, u):
    """Numerical residual of the identity -u*ln(x*exp(-x/u)) = g_u(x).

    The left side is evaluated literally (transform first, then log), so the
    result measures floating-point agreement rather than restating algebra.
    """
    reference = g_u(x, u)
    arr = np.asarray(x, dtype=float)
    with np.errstate(under="ignore"):
        y = arr * np.exp(-arr / u)
    lhs = -u * np.log(y)
    out = np.abs(lhs - reference)
    if arr.ndim == 0:
        return float(out)
    return out


def i_divergence(y, theta, u):
    """Sum of g_u(theta * y_i) - g_u(u) over the sample; non-negative.

    Each term compares the kernel at theta*y_i with its minimum value, so the
    sum vanishes exactly when every theta*y_i equals u.
    """
    if not (np.isscalar(theta) and theta > 0):
        raise DomainError("i_divergence requires a scalar theta > 0")
    arr = np.asarray(y, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError("i_divergence requires a non-empty 1-d sample")
    terms = g_u(theta * arr, u) - g_u(u, u)
    total = float(np.sum(terms))
    return max(total, 0.0)
