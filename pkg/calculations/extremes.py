"""
Series and parallel systems built from an FGM pair.

T1 = min(X, Y) fails with the first component, T2 = max(X, Y) with the
last. Their distribution functions are diagonal sections of the joint
survival and joint cdf; the rates are log-derivatives of those sections.
"""

import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np

from calculations import marginal_linexp as ml
from calculations.errors import CurveInvariantError, DomainError
from calculations.fgm_joint import BleFgmParams, joint_cdf, joint_survival

logger = logging.getLogger(__name__)

CurveKind = Literal["cdf_max", "rev_hazard_max", "survival_min", "hazard_min"]
Monotonicity = Literal["increasing", "decreasing", "non_monotone", "constant"]

# violations smaller than this are float noise and get flattened
_REPAIR_TOL = 1e-12


@dataclass(frozen=True)
class ExtremeCurve:
    t_grid: np.ndarray
    values: np.ndarray
    kind: CurveKind


def _out(value):
    return float(value) if np.ndim(value) == 0 else value


# ---------------------------------------------------------------------------
# Parallel system: T2 = max(X, Y)
# ---------------------------------------------------------------------------


def cdf_max(p: BleFgmParams, t):
    """P[max(X, Y) <= t], the joint cdf on the diagonal."""
    return joint_cdf(p, t, t)


def reversed_hazard_max(p: BleFgmParams, t):
    """
    d/dt ln P[max(X, Y) <= t] for t > 0.

        rh_X + rh_Y - lam (f_X S_Y + f_Y S_X) / (1 + lam S_X S_Y)

    with rh = f / F for each marginal.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise DomainError(f"reversed hazard of the maximum needs t > 0, got {t}")
    sx, sy = ml.survival(p.mx, t), ml.survival(p.my, t)
    fx, fy = ml.pdf(p.mx, t), ml.pdf(p.my, t)
    correction = p.lam * (fx * sy + fy * sx) / (1.0 + p.lam * sx * sy)
    return _out(ml.reversed_hazard(p.mx, t) + ml.reversed_hazard(p.my, t) - correction)


# ---------------------------------------------------------------------------
# Series system: T1 = min(X, Y)
# ---------------------------------------------------------------------------


def survival_min(p: BleFgmParams, t):
    """P[min(X, Y) > t], the joint survival on the diagonal."""
    return joint_survival(p, t, t)


def hazard_min(p: BleFgmParams, t):
    """
    -d/dt ln P[min(X, Y) > t].

        h_X + h_Y - lam (f_X F_Y + f_Y F_X) / (1 + lam F_X F_Y)
    """
    t = np.asarray(t, dtype=float)
    if np.any(np.asarray(survival_min(p, t)) <= 0):
        raise DomainError(f"survival of the minimum underflows at t = {t}")
    cx, cy = ml.cdf(p.mx, t), ml.cdf(p.my, t)
    fx, fy = ml.pdf(p.mx, t), ml.pdf(p.my, t)
    correction = p.lam * (fx * cy + fy * cx) / (1.0 + p.lam * cx * cy)
    return _out(ml.hazard(p.mx, t) + ml.hazard(p.my, t) - correction)


_EVALUATORS = {
    "cdf_max": cdf_max,
    "rev_hazard_max": reversed_hazard_max,
    "survival_min": survival_min,
    "hazard_min": hazard_min,
}


# ---------------------------------------------------------------------------
# Grid curves
# ---------------------------------------------------------------------------


def _check_probability_curve(values: np.ndarray, kind: CurveKind) -> np.ndarray:
    low, high = values.min(), values.max()
    if low < -_REPAIR_TOL or high > 1.0 + _REPAIR_TOL:
        bad = int(np.argmin(values) if low < 0 else np.argmax(values))
        raise CurveInvariantError(
            f"{kind} leaves [0, 1] at grid index {bad}", index=bad, detail=values[bad]
        )
    values = np.clip(values, 0.0, 1.0)

    steps = np.diff(values) if kind == "cdf_max" else -np.diff(values)
    if steps.size and steps.min() < -_REPAIR_TOL:
        bad = int(np.argmin(steps)) + 1
        raise CurveInvariantError(
            f"{kind} breaks monotonicity at grid index {bad}",
            index=bad,
            detail=float(steps.min()),
        )
    if kind == "cdf_max":
        return np.maximum.accumulate(values)
    return np.minimum.accumulate(values)


def extreme_curve(p: BleFgmParams, kind: CurveKind, t_grid) -> ExtremeCurve:
    """
    Evaluate one min/max quantity over a time grid.

    Args:
        p: Distribution parameters.
        kind: Which quantity to evaluate.
        t_grid: Strictly increasing, nonnegative times.

    Returns:
        ExtremeCurve with monotonicity of cdf_max / survival_min enforced.

    Raises:
        DomainError: bad grid, or a pointwise domain error (message and
            ``index`` attribute name the grid point).
        CurveInvariantError: a probability curve is out of range or
            non-monotone beyond float noise.
    """
    if kind not in _EVALUATORS:
        raise DomainError(f"unknown curve kind {kind!r}")
    grid = np.asarray(t_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise DomainError("time grid must be a non-empty 1-D sequence")
    if np.any(grid < 0) or np.any(np.diff(grid) <= 0):
        raise DomainError("time grid must be nonnegative and strictly increasing")

    evaluate = _EVALUATORS[kind]
    values = np.empty_like(grid)
    for i, t in enumerate(grid):
        try:
            values[i] = evaluate(p, t)
        except DomainError as exc:
            err = DomainError(f"{kind} at grid index {i} (t = {t:g}): {exc}")
            err.index = i
            raise err from exc

    if kind in ("cdf_max", "survival_min"):
        values = _check_probability_curve(values, kind)
    logger.debug("%s curve over %d points, lambda=%s", kind, grid.size, p.lam)
    return ExtremeCurve(grid, values, kind)


def classify_monotonicity(curve: ExtremeCurve, tol: float = 1e-12) -> Monotonicity:
    """Monotone shape of a curve's values, ignoring steps below ``tol``."""
    steps = np.diff(curve.values)
    rising = bool(np.any(steps > tol))
    falling = bool(np.any(steps < -tol))
    if rising and falling:
        return "non_monotone"
    if rising:
        return "increasing"
    if falling:
        return "decreasing"
    return "constant"
