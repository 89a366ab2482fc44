"""
Dependence diagnostics for the FGM linear-exponential pair.

- Local dependence function gamma (mixed log-derivative of the density)
- TP2 / RR2 classification with a brute-force 2x2 determinant sweep
- Hazard gradient (conditional hazards of X and Y given survival)
- Clayton-Oakes cross-ratio theta
"""

import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np

from calculations import marginal_linexp as ml
from calculations.errors import DomainError
from calculations.fgm_joint import BleFgmParams, joint_pdf, joint_survival

logger = logging.getLogger(__name__)

Classification = Literal["TP2", "RR2", "independent"]
Sign = Literal["positive", "negative", "zero"]

_DET_TOL = 1e-12


def _out(value):
    return float(value) if np.ndim(value) == 0 else value


def _pieces(p: BleFgmParams, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return (
        ml.cdf(p.mx, x),
        ml.cdf(p.my, y),
        ml.pdf(p.mx, x),
        ml.pdf(p.my, y),
    )


# ---------------------------------------------------------------------------
# Local dependence
# ---------------------------------------------------------------------------


def local_dependence(p: BleFgmParams, x, y):
    """
    gamma(x, y) = d^2/dx dy ln f(x, y).

    Only the FGM bracket depends on both arguments, which leaves
    4 lam f_X f_Y / (1 + lam (1 - 2F_X)(1 - 2F_Y))^2.
    """
    if np.any(np.asarray(joint_pdf(p, x, y)) <= 0):
        raise DomainError(f"joint density vanishes at ({x}, {y})")
    cx, cy, fx, fy = _pieces(p, x, y)
    g = 1.0 + p.lam * (1.0 - 2.0 * cx) * (1.0 - 2.0 * cy)
    return _out(4.0 * p.lam * fx * fy / (g * g))


# ---------------------------------------------------------------------------
# TP2 / RR2
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Tp2Sweep:
    """Extremes of f(x,y) f(u,v) - f(x,v) f(u,y) over x < u, y < v."""

    min_det: float
    max_det: float
    pairs: int


@dataclass(frozen=True)
class DependenceClass:
    classification: Classification
    gamma_sign: Sign
    sweep: Tp2Sweep | None = None

    @property
    def sweep_consistent(self) -> bool:
        if self.sweep is None:
            return True
        if self.classification == "TP2":
            return self.sweep.min_det >= -_DET_TOL
        if self.classification == "RR2":
            return self.sweep.max_det <= _DET_TOL
        return abs(self.sweep.min_det) <= _DET_TOL and abs(self.sweep.max_det) <= _DET_TOL


def default_sweep_grid(p: BleFgmParams, count: int = 10) -> tuple[np.ndarray, np.ndarray]:
    """Marginal quantiles from 5% to 95%, so the grid follows each time scale."""
    levels = np.linspace(0.05, 0.95, count)
    return ml.quantile(p.mx, levels), ml.quantile(p.my, levels)


def tp2_determinant_sweep(p: BleFgmParams, x_grid, y_grid) -> Tp2Sweep:
    """
    Evaluate every 2x2 density determinant on a grid.

    TP2 means all determinants are >= 0, RR2 that all are <= 0.
    """
    xs = np.asarray(x_grid, dtype=float)
    ys = np.asarray(y_grid, dtype=float)
    if xs.size < 2 or ys.size < 2:
        raise DomainError("determinant sweep needs at least two points per axis")
    f = np.asarray(joint_pdf(p, xs[:, None], ys[None, :]))
    # indices (i, k, j, l): x_i, x_k, y_j, y_l
    det = (
        f[:, None, :, None] * f[None, :, None, :]
        - f[:, None, None, :] * f[None, :, :, None]
    )
    upper_x = np.triu(np.ones((xs.size, xs.size), dtype=bool), k=1)
    upper_y = np.triu(np.ones((ys.size, ys.size), dtype=bool), k=1)
    mask = upper_x[:, :, None, None] & upper_y[None, None, :, :]
    values = det[mask]
    return Tp2Sweep(float(values.min()), float(values.max()), int(values.size))


def classify_tp2(p: BleFgmParams, x_grid=None, y_grid=None) -> DependenceClass:
    """
    Classify the density as TP2, RR2 or independent.

    gamma has the sign of lam everywhere, so lam decides the label; the
    determinant sweep on the grid (marginal quantiles by default) is
    attached as corroboration.
    """
    if p.lam > 0:
        label, sign = "TP2", "positive"
    elif p.lam < 0:
        label, sign = "RR2", "negative"
    else:
        label, sign = "independent", "zero"

    if x_grid is None or y_grid is None:
        x_grid, y_grid = default_sweep_grid(p)
    result = DependenceClass(label, sign, tp2_determinant_sweep(p, x_grid, y_grid))
    if not result.sweep_consistent:
        logger.warning(
            "determinant sweep disagrees with %s label: min %.3g, max %.3g",
            label, result.sweep.min_det, result.sweep.max_det,
        )
    return result


# ---------------------------------------------------------------------------
# Hazard gradient
# ---------------------------------------------------------------------------


def hazard_gradient(p: BleFgmParams, x, y):
    """
    (h1, h2) = (-d/dx ln S(x, y), -d/dy ln S(x, y)).

    h1 = h_X [1 + lam F_Y (2F_X - 1)] / (1 + lam F_X F_Y), h2 symmetric.
    """
    if np.any(np.asarray(joint_survival(p, x, y)) <= 0):
        raise DomainError(f"joint survival underflows at ({x}, {y})")
    cx, cy, _, _ = _pieces(p, x, y)
    den = 1.0 + p.lam * cx * cy
    h1 = ml.hazard(p.mx, x) * (1.0 + p.lam * cy * (2.0 * cx - 1.0)) / den
    h2 = ml.hazard(p.my, y) * (1.0 + p.lam * cx * (2.0 * cy - 1.0)) / den
    return _out(h1), _out(h2)


@dataclass(frozen=True)
class HazardMonotonicity:
    direction: Literal["non_increasing", "non_decreasing", "constant"]
    holds: bool
    worst_step: float


def conditional_hazard_monotonicity(
    p: BleFgmParams, x_grid, y_grid, tol: float = 1e-12
) -> HazardMonotonicity:
    """
    Check that h1(x, .) moves in y against the sign of lam.

    Positive dependence makes the conditional hazard of X fall as Y is
    known to survive longer; negative dependence makes it rise.
    """
    xs = np.asarray(x_grid, dtype=float)
    ys = np.asarray(y_grid, dtype=float)
    h1, _ = hazard_gradient(p, xs[:, None], ys[None, :])
    steps = np.diff(np.asarray(h1), axis=1)
    if p.lam > 0:
        worst = float(steps.max())
        return HazardMonotonicity("non_increasing", worst <= tol, worst)
    if p.lam < 0:
        worst = float(steps.min())
        return HazardMonotonicity("non_decreasing", worst >= -tol, worst)
    worst = float(np.abs(steps).max())
    return HazardMonotonicity("constant", worst <= tol, worst)


# ---------------------------------------------------------------------------
# Clayton-Oakes
# ---------------------------------------------------------------------------


def survival_partial_x(p: BleFgmParams, x, y):
    """dS/dx = -f_X S_Y [1 + lam F_Y (2F_X - 1)]."""
    cx, cy, fx, _ = _pieces(p, x, y)
    return _out(-fx * ml.survival(p.my, y) * (1.0 + p.lam * cy * (2.0 * cx - 1.0)))


def survival_partial_y(p: BleFgmParams, x, y):
    cx, cy, _, fy = _pieces(p, x, y)
    return _out(-fy * ml.survival(p.mx, x) * (1.0 + p.lam * cx * (2.0 * cy - 1.0)))


def clayton_oakes_theta(p: BleFgmParams, x, y):
    """
    theta = S f / (S_x S_y), with S_x, S_y the partials of the joint survival.

    Equals 1 under independence and 1 + lam at the origin.
    """
    sx = np.asarray(survival_partial_x(p, x, y))
    sy = np.asarray(survival_partial_y(p, x, y))
    if np.any(sx == 0) or np.any(sy == 0):
        raise DomainError(f"a survival partial vanishes at ({x}, {y})")
    s = np.asarray(joint_survival(p, x, y))
    if np.any(s <= 0):
        raise DomainError(f"joint survival underflows at ({x}, {y})")
    return _out(s * np.asarray(joint_pdf(p, x, y)) / (sx * sy))
