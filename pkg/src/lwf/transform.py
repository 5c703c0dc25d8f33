"""Forward and inverse transforms of the form y = u * exp(gamma * u) * sigma + mu."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParamError
from .lambertw import _w_principal
from .sampling import values_of

_NEG_INV_E = -math.exp(-1.0)
_BRANCH_SLACK = 1e-14


@dataclass(frozen=True)
class LwfParams:
    """Location mu, scale sigma > 0, and skew strength gamma."""

    mu: float
    sigma: float
    gamma: float

    def __post_init__(self):
        ok = (
            np.isfinite(self.mu)
            and np.isfinite(self.sigma)
            and np.isfinite(self.gamma)
            and self.sigma > 0
        )
        if not ok:
            raise ParamError(
                f"invalid transform parameters mu={self.mu} sigma={self.sigma} gamma={self.gamma}"
            )


class Policy(enum.Enum):
    STRICT = "strict"
    CLAMP = "clamp"


@dataclass(frozen=True)
class InverseReport:
    """Back-transformed values plus which inputs hit the branch-point clamp."""

    values: np.ndarray
    clamped_count: int
    clamped_indices: np.ndarray


def forward(u, params: LwfParams) -> np.ndarray:
    """y = u * exp(gamma * u) * sigma + mu; gamma = 0 is the plain affine map."""
    x = values_of(u)
    with np.errstate(over="ignore", under="ignore"):
        y = x * np.exp(params.gamma * x) * params.sigma + params.mu
    return y


def inverse(y, params: LwfParams, policy: Policy = Policy.CLAMP) -> InverseReport:
    """Recover u from y on the principal branch.

    Arguments mapping below the branch point (gamma * z < -1/e beyond
    representation slack) are clamped to -1/gamma under Policy.CLAMP and
    reported; under Policy.STRICT they raise DomainError.
    """
    x = values_of(y)
    if not np.all(np.isfinite(x)):
        raise DomainError("inverse transform requires finite inputs")
    z = (x - params.mu) / params.sigma
    if params.gamma == 0.0:
        return InverseReport(values=z, clamped_count=0, clamped_indices=np.empty(0, dtype=int))
    a = params.gamma * z
    below = a < _NEG_INV_E - _BRANCH_SLACK
    idx = np.nonzero(below)[0]
    if idx.size and policy is Policy.STRICT:
        raise DomainError(
            f"{idx.size} value(s) below the branch point, first at index {int(idx[0])}"
        )
    u = np.empty_like(z)
    u[below] = -1.0 / params.gamma
    inside = ~below
    if np.any(inside):
        arg = np.maximum(a[inside], _NEG_INV_E)
        u[inside] = _w_principal(arg) / params.gamma
    return InverseReport(values=u, clamped_count=int(idx.size), clamped_indices=idx)


def handle_zeros(values, policy: str = "drop", seed=None) -> tuple[np.ndarray, int]:
    """Resolve exact zeros in a series before positivity-requiring analyses.

    "drop" removes them; "uniform_fill" replaces each with a seeded uniform
    draw between 0 and the smallest positive value present.  Returns the
    resolved array and the number of zeros handled.
    """
    x = values_of(values)
    zero = x == 0.0
    count = int(zero.sum())
    if policy == "drop":
        return x[~zero], count
    if policy == "uniform_fill":
        if count == 0:
            return x.copy(), 0
        positive = x[x > 0.0]
        if positive.size == 0:
            raise DomainError("uniform_fill needs at least one positive value")
        upper = float(positive.min())
        rng = np.random.default_rng(seed)
        out = x.copy()
        out[zero] = rng.uniform(0.0, upper, size=count)
        return out, count
    raise ParamError(f"unknown zeros policy {policy!r}")
