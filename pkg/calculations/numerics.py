"""
Shared numerical substrate.

Adaptive quadrature over rays, boxes and the positive quadrant, the
linear-exponential Gaussian integral via the scaled complementary error
function, central finite differences, and a guarded summation engine for
asymptotic (generally divergent) series.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Literal, NamedTuple

import numpy as np
from scipy.integrate import cubature, quad
from scipy.special import erfcx

from calculations.errors import DomainError, ToleranceNotMetError

logger = logging.getLogger(__name__)

SeriesMode = Literal["to_cap", "optimal_truncation"]


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and subdivision budget for adaptive quadrature."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 2**15

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise DomainError("quadrature tolerances must be non-negative")
        if self.abs_tol + self.rel_tol <= 0:
            raise DomainError("abs_tol + rel_tol must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be at least 1")

    def allowance(self, value: float) -> float:
        """Error allowed for an integral of the given magnitude."""
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_QUADRATURE = QuadratureSpec()


class QuadratureResult(NamedTuple):
    value: float
    error: float


@dataclass(frozen=True)
class SeriesResult:
    """Truncated series value plus truncation diagnostics."""

    value: float
    terms_used: int
    first_omitted_magnitude: float
    diverged: bool

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "terms": self.terms_used,
            "first_omitted": self.first_omitted_magnitude,
            "diverged": self.diverged,
        }


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------


def integrate_ray(
    f: Callable[[float], float],
    lower: float = 0.0,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> QuadratureResult:
    """
    Integrate f over [lower, inf).

    QUADPACK maps the ray onto (0, 1] with the rational substitution
    t = lower + (1 - u) / u before applying 15-point Gauss-Kronrod.

    Args:
        f: Scalar integrand, finite and absolutely integrable on the ray.
        lower: Left end point (>= 0).
        spec: Tolerances and subdivision budget.

    Returns:
        QuadratureResult(value, error).

    Raises:
        ToleranceNotMetError: budget exhausted before the tolerance was met.
    """
    if lower < 0:
        raise DomainError(f"ray lower bound must be >= 0, got {lower}")

    out = quad(
        lambda t: float(f(t)),
        lower,
        np.inf,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        limit=spec.max_subdivisions,
        full_output=1,
    )
    value, error = float(out[0]), float(out[1])
    # quad appends a message only when ier != 0
    if len(out) > 3 or error > spec.allowance(value):
        raise ToleranceNotMetError(
            f"ray quadrature did not meet tolerance (estimate {value:.12g}, "
            f"error {error:.3g})",
            estimate=value,
            error=error,
        )
    return QuadratureResult(value, error)


def _ray_map(u: np.ndarray, lower: float) -> tuple[np.ndarray, np.ndarray]:
    """Map u in [0, 1) onto [lower, inf); returns (t, dt/du)."""
    with np.errstate(divide="ignore"):
        one_minus = 1.0 - u
        t = lower + u / one_minus
        jac = 1.0 / (one_minus * one_minus)
    return t, jac


def integrate_box(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    lower: tuple[float, float],
    upper: tuple[float, float],
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> QuadratureResult:
    """
    Adaptive 2-D integral of a vectorized integrand f(x, y) over a box.

    Either upper limit may be ``inf``; infinite axes are mapped onto [0, 1)
    with the rational substitution t = lower + u / (1 - u).

    Raises:
        ToleranceNotMetError: budget exhausted before the tolerance was met.
    """
    infinite = [math.isinf(hi) for hi in upper]
    a = [0.0 if inf_axis else lo for lo, inf_axis in zip(lower, infinite)]
    b = [1.0 if inf_axis else hi for hi, inf_axis in zip(upper, infinite)]

    def mapped(points: np.ndarray) -> np.ndarray:
        coords = []
        weight = np.ones(points.shape[0])
        for axis in range(2):
            u = points[:, axis]
            if infinite[axis]:
                t, jac = _ray_map(u, lower[axis])
                coords.append(t)
                weight = weight * jac
            else:
                coords.append(u)
        with np.errstate(invalid="ignore", over="ignore"):
            values = np.asarray(f(coords[0], coords[1]), dtype=float) * weight
        return np.where(np.isfinite(values), values, 0.0)

    res = cubature(
        mapped,
        a,
        b,
        rule="gk21",
        rtol=spec.rel_tol,
        atol=spec.abs_tol,
        max_subdivisions=spec.max_subdivisions,
    )
    value = float(np.asarray(res.estimate))
    error = float(np.asarray(res.error))
    if res.status != "converged":
        raise ToleranceNotMetError(
            f"2-D quadrature did not converge after {res.subdivisions} "
            f"subdivisions (estimate {value:.12g}, error {error:.3g})",
            estimate=value,
            error=error,
        )
    logger.debug(
        "integrate_box %s-%s: %.12g +/- %.2g (%d subdivisions)",
        lower, upper, value, error, res.subdivisions,
    )
    return QuadratureResult(value, error)


def integrate_quadrant(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> QuadratureResult:
    """Integrate a vectorized f(x, y) over [0, inf)^2."""
    return integrate_box(f, (0.0, 0.0), (math.inf, math.inf), spec)


# ---------------------------------------------------------------------------
# Special functions
# ---------------------------------------------------------------------------


def gauss_linexp_integral(a, b):
    """
    Evaluate the integral of exp(-(a t + b t^2 / 2)) over [0, inf).

    b = 0 gives 1 / a. For b > 0 the value is
    sqrt(pi / (2b)) * erfcx(a / sqrt(2b)); using the scaled erfc keeps
    exp(a^2 / 2b) from overflowing when a^2 / b is large.

    Accepts scalars or broadcastable arrays; returns a float for scalar input.
    """
    a_arr = np.asarray(a, dtype=float)
    b_arr = np.asarray(b, dtype=float)
    if np.any(a_arr < 0) or np.any(b_arr < 0):
        raise DomainError("gauss_linexp_integral needs a >= 0 and b >= 0")
    if np.any((a_arr == 0) & (b_arr == 0)):
        raise DomainError("gauss_linexp_integral diverges at a = b = 0")

    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.sqrt(2.0 * b_arr)
        gaussian = math.sqrt(math.pi) / scale * erfcx(a_arr / scale)
        exponential = 1.0 / a_arr
    result = np.where(b_arr > 0, gaussian, exponential)
    return float(result) if result.ndim == 0 else result


# ---------------------------------------------------------------------------
# Guarded summation
# ---------------------------------------------------------------------------


def sum_guarded(
    term: Callable[[int], float],
    cap: int,
    mode: SeriesMode = "optimal_truncation",
) -> SeriesResult:
    """
    Sum term(0), term(1), ... under explicit truncation control.

    ``to_cap`` adds exactly ``cap`` terms. ``optimal_truncation`` stops
    right before the first nonzero term whose magnitude is not smaller than
    its predecessor's, the classical rule for asymptotic series. Either way
    the magnitude of the first omitted term is recorded; ``diverged`` is set
    when the terms grow before ever shrinking (optimal mode), are still
    growing at the cap (to_cap mode), or stop being finite.

    Divergence is reported, never raised.
    """
    if cap < 1:
        raise DomainError(f"series cap must be >= 1, got {cap}")

    if mode == "to_cap":
        terms = [term(k) for k in range(cap)]
        if not all(math.isfinite(t) for t in terms):
            return SeriesResult(math.nan, cap, math.inf, True)
        omitted = abs(term(cap))
        growing = omitted > abs(terms[-1]) and omitted > 0
        diverged = not math.isfinite(omitted) or growing
        return SeriesResult(
            math.fsum(terms), cap, omitted if math.isfinite(omitted) else math.inf, diverged
        )

    if mode != "optimal_truncation":
        raise DomainError(f"unknown summation mode {mode!r}")

    terms: list[float] = []
    previous: float | None = None
    decreased = False
    for k in range(cap):
        t = term(k)
        magnitude = abs(t)
        if not math.isfinite(t):
            return SeriesResult(math.fsum(terms), k, math.inf, True)
        if previous is not None and magnitude > 0 and magnitude >= previous:
            return SeriesResult(math.fsum(terms), k, magnitude, not decreased)
        if previous is not None and magnitude < previous:
            decreased = True
        terms.append(t)
        previous = magnitude

    omitted = abs(term(cap))
    if not math.isfinite(omitted):
        return SeriesResult(math.fsum(terms), cap, math.inf, True)
    return SeriesResult(math.fsum(terms), cap, omitted, False)


def safe_pow(base: float, exponent: int) -> float:
    """base ** exponent, saturating to infinity where float pow would raise."""
    try:
        return base**exponent
    except OverflowError:
        return math.copysign(math.inf, base) if exponent % 2 else math.inf


def safe_div(num: float, den: float) -> float:
    """Scalar division that returns a signed infinity for a zero denominator."""
    if den == 0:
        return math.copysign(math.inf, num) if num != 0 else 0.0
    return num / den


def anti_diagonal(term2: Callable[[int, int], float]) -> Callable[[int], float]:
    """Collapse a double series onto single index k = m + n."""

    def collapsed(k: int) -> float:
        return math.fsum(term2(m, k - m) for m in range(k + 1))

    return collapsed


# ---------------------------------------------------------------------------
# Finite differences
# ---------------------------------------------------------------------------


def default_step(t: float) -> float:
    return max(1e-5, 1e-5 * abs(t))


def default_mixed_step(x: float, y: float) -> float:
    return max(1e-4, 1e-4 * max(abs(x), abs(y)))


@dataclass(frozen=True)
class StepSpec:
    """
    Finite-difference steps relative to a length scale.

    The validation suite multiplies these by each marginal's median so the
    stencil stays inside [0, inf) at every quantile it samples, whatever
    the hazard rates.
    """

    rel_step: float = 1e-5
    rel_mixed_step: float = 3e-4

    def __post_init__(self):
        if not (0 < self.rel_step < 1 and 0 < self.rel_mixed_step < 1):
            raise DomainError("relative finite-difference steps must lie in (0, 1)")


DEFAULT_STEPS = StepSpec()


def finite_diff(
    f: Callable[[float], float],
    t: float,
    h: float | None = None,
    lower: float = 0.0,
    one_sided: bool = False,
) -> float:
    """
    Central-difference first derivative with O(h^2) error.

    When the stencil would cross ``lower`` the second-order forward formula
    is used if ``one_sided`` is allowed, otherwise a DomainError is raised.
    """
    h = default_step(t) if h is None else h
    if h <= 0:
        raise DomainError("finite-difference step must be positive")
    if t - h < lower:
        if not one_sided:
            raise DomainError(
                f"stencil [{t - h:.3g}, {t + h:.3g}] leaves the domain [{lower}, inf)"
            )
        return (-3.0 * f(t) + 4.0 * f(t + h) - f(t + 2.0 * h)) / (2.0 * h)
    return (f(t + h) - f(t - h)) / (2.0 * h)


def finite_diff_mixed(
    g: Callable[[float, float], float],
    x: float,
    y: float,
    h: float | tuple[float, float] | None = None,
    lower: float = 0.0,
) -> float:
    """
    Four-point estimate of the mixed partial d^2 g / dx dy.

    ``h`` is one step for both axes or an (hx, hy) pair.
    """
    h = default_mixed_step(x, y) if h is None else h
    hx, hy = h if isinstance(h, tuple) else (h, h)
    if hx <= 0 or hy <= 0:
        raise DomainError("finite-difference step must be positive")
    if x - hx < lower or y - hy < lower:
        raise DomainError(f"mixed stencil at ({x}, {y}) leaves the domain")
    return (
        g(x + hx, y + hy) - g(x + hx, y - hy) - g(x - hx, y + hy) + g(x - hx, y - hy)
    ) / (4.0 * hx * hy)


# ---------------------------------------------------------------------------
# Random streams
# ---------------------------------------------------------------------------


def substream(master_seed: int, index: int) -> np.random.Generator:
    """Independent generator for replicate ``index`` of a seeded run."""
    return np.random.default_rng(
        np.random.SeedSequence(master_seed, spawn_key=(index,))
    )


def master_stream(master_seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed))
