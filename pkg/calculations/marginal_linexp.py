"""
Linear exponential (linear failure-rate) marginal distribution.

Hazard alpha + beta * t, cumulative hazard H(t) = alpha t + beta t^2 / 2.
beta = 0 is the exponential law, alpha = 0 the Rayleigh-type law.

All functions accept a scalar or a numpy array for the time argument and
return a float for scalar input.
"""

from dataclasses import dataclass

import numpy as np

from calculations.errors import DomainError
from calculations.numerics import gauss_linexp_integral


@dataclass(frozen=True)
class LinExpParams:
    """Rate pair (alpha, beta) of one marginal."""

    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise DomainError(
                f"alpha and beta must be >= 0, got ({self.alpha}, {self.beta})"
            )
        if self.alpha + self.beta <= 0:
            raise DomainError("alpha + beta must be positive")

    @property
    def is_exponential(self) -> bool:
        return self.beta == 0


def _out(value: np.ndarray):
    return float(value) if np.ndim(value) == 0 else value


def _time(t, strict: bool = False) -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    if strict and np.any(arr <= 0):
        raise DomainError(f"time must be > 0, got {t}")
    if np.any(arr < 0):
        raise DomainError(f"time must be >= 0, got {t}")
    return arr


def _cumulative_hazard(p: LinExpParams, t: np.ndarray) -> np.ndarray:
    return p.alpha * t + 0.5 * p.beta * t * t


# ---------------------------------------------------------------------------
# Distribution functions
# ---------------------------------------------------------------------------


def cumulative_hazard(p: LinExpParams, t):
    return _out(_cumulative_hazard(p, _time(t)))


def pdf(p: LinExpParams, t):
    """Density (alpha + beta t) exp(-H(t))."""
    t = _time(t)
    return _out((p.alpha + p.beta * t) * np.exp(-_cumulative_hazard(p, t)))


def cdf(p: LinExpParams, t):
    """Distribution function 1 - exp(-H(t)), computed with expm1."""
    t = _time(t)
    return _out(-np.expm1(-_cumulative_hazard(p, t)))


def survival(p: LinExpParams, t):
    t = _time(t)
    return _out(np.exp(-_cumulative_hazard(p, t)))


def hazard(p: LinExpParams, t):
    t = _time(t)
    return _out(p.alpha + p.beta * t)


def reversed_hazard(p: LinExpParams, t):
    """
    Reversed hazard f(t) / F(t), defined for t > 0.

    This is d/dt ln F(t), the rate that governs the maximum of lifetimes.
    """
    t = _time(t, strict=True)
    h = _cumulative_hazard(p, t)
    # f / F = (alpha + beta t) / (exp(H) - 1)
    return _out((p.alpha + p.beta * t) / np.expm1(h))


def log_density_slope(p: LinExpParams, t):
    """
    d/dt ln f(t) = (beta - (alpha + beta t)^2) / (alpha + beta t).

    Kept alongside reversed_hazard because the min/max literature sometimes
    labels this slope a reversed hazard; the two are different quantities.
    """
    t = _time(t)
    rate = p.alpha + p.beta * t
    if np.any(rate == 0):
        raise DomainError("log density slope undefined where alpha + beta t = 0")
    return _out((p.beta - rate * rate) / rate)


def quantile(p: LinExpParams, u):
    """
    Solve alpha t + beta t^2 / 2 = -ln(1 - u) for t.

    Uses the rationalized root 2E / (alpha + sqrt(alpha^2 + 2 beta E)),
    which covers beta = 0 and alpha = 0 without branching.
    """
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr < 0) or np.any(u_arr >= 1):
        raise DomainError(f"quantile needs 0 <= u < 1, got {u}")
    e = -np.log1p(-u_arr)
    denom = p.alpha + np.sqrt(p.alpha * p.alpha + 2.0 * p.beta * e)
    with np.errstate(invalid="ignore"):
        t = np.where(e > 0, 2.0 * e / denom, 0.0)
    return _out(t)


def sample(p: LinExpParams, rng: np.random.Generator, size: int | None = None):
    """Inverse-transform draw(s) quantile(p, U)."""
    return quantile(p, rng.random(size))


# ---------------------------------------------------------------------------
# Moments
# ---------------------------------------------------------------------------


def mean(p: LinExpParams) -> float:
    """Mean lifetime, the integral of the survival function."""
    return gauss_linexp_integral(p.alpha, p.beta)
