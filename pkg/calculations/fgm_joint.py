"""
Bivariate FGM distribution over two linear exponential marginals.

    F(x, y) = F_X F_Y [1 + lam (1 - F_X)(1 - F_Y)],   |lam| <= 1

Joint cdf/pdf/survival, conditionals, the bivariate hazard, rank
dependence summaries and an exact conditional-inversion sampler. Every
function broadcasts over numpy arrays of x and y.
"""

import logging
from dataclasses import dataclass

import numpy as np

from calculations import marginal_linexp as ml
from calculations.errors import DomainError
from calculations.marginal_linexp import LinExpParams
from calculations.numerics import DEFAULT_QUADRATURE, QuadratureResult, QuadratureSpec, integrate_box

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BleFgmParams:
    """Both marginals plus the FGM dependence parameter ``lam``."""

    mx: LinExpParams
    my: LinExpParams
    lam: float

    def __post_init__(self):
        if not -1.0 <= self.lam <= 1.0:
            raise DomainError(f"|lambda| must be <= 1, got {self.lam}")

    @classmethod
    def from_rates(
        cls, alpha1: float, beta1: float, alpha2: float, beta2: float, lam: float
    ) -> "BleFgmParams":
        return cls(LinExpParams(alpha1, beta1), LinExpParams(alpha2, beta2), lam)

    def with_lambda(self, lam: float) -> "BleFgmParams":
        return BleFgmParams(self.mx, self.my, lam)

    def as_dict(self) -> dict[str, float]:
        return {
            "alpha1": self.mx.alpha,
            "beta1": self.mx.beta,
            "alpha2": self.my.alpha,
            "beta2": self.my.beta,
            "lambda": self.lam,
        }


def _out(value):
    return float(value) if np.ndim(value) == 0 else value


def _coords(x, y) -> tuple[np.ndarray, np.ndarray]:
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if np.any(xa < 0) or np.any(ya < 0):
        raise DomainError(f"coordinates must be >= 0, got ({x}, {y})")
    return xa, ya


# ---------------------------------------------------------------------------
# Joint distribution
# ---------------------------------------------------------------------------


def joint_cdf(p: BleFgmParams, x, y):
    x, y = _coords(x, y)
    fx, fy = ml.cdf(p.mx, x), ml.cdf(p.my, y)
    sx, sy = ml.survival(p.mx, x), ml.survival(p.my, y)
    return _out(fx * fy * (1.0 + p.lam * sx * sy))


def joint_pdf(p: BleFgmParams, x, y):
    x, y = _coords(x, y)
    fx, fy = ml.cdf(p.mx, x), ml.cdf(p.my, y)
    bracket = 1.0 + p.lam * (2.0 * fx - 1.0) * (2.0 * fy - 1.0)
    return _out(ml.pdf(p.mx, x) * ml.pdf(p.my, y) * bracket)


def joint_survival(p: BleFgmParams, x, y):
    """P[X > x, Y > y] = S_X S_Y [1 + lam F_X F_Y]."""
    x, y = _coords(x, y)
    fx, fy = ml.cdf(p.mx, x), ml.cdf(p.my, y)
    sx, sy = ml.survival(p.mx, x), ml.survival(p.my, y)
    return _out(sx * sy * (1.0 + p.lam * fx * fy))


def bivariate_hazard(p: BleFgmParams, x, y):
    """
    r(x, y) = f(x, y) / P[X > x, Y > y].

    Evaluated in the cancelled form
    h_X h_Y [1 + lam (2F_X - 1)(2F_Y - 1)] / [1 + lam F_X F_Y].
    """
    x, y = _coords(x, y)
    if np.any(joint_survival(p, x, y) <= 0):
        raise DomainError(f"joint survival underflows at ({x}, {y})")
    fx, fy = ml.cdf(p.mx, x), ml.cdf(p.my, y)
    num = 1.0 + p.lam * (2.0 * fx - 1.0) * (2.0 * fy - 1.0)
    den = 1.0 + p.lam * fx * fy
    return _out(ml.hazard(p.mx, x) * ml.hazard(p.my, y) * num / den)


# ---------------------------------------------------------------------------
# Conditionals
# ---------------------------------------------------------------------------


def conditional_pdf_x_given_y(p: BleFgmParams, x, y):
    """Density of X given Y = y."""
    x, y = _coords(x, y)
    fx, fy = ml.cdf(p.mx, x), ml.cdf(p.my, y)
    return _out(ml.pdf(p.mx, x) * (1.0 + p.lam * (2.0 * fx - 1.0) * (2.0 * fy - 1.0)))


def conditional_cdf_x_given_y_le(p: BleFgmParams, x, y):
    """
    P[X <= x | Y <= y] = F_X [1 + lam (1 - F_X)(1 - F_Y)].

    Equal to F(x, y) / F_Y(y); needs F_Y(y) > 0, i.e. y > 0.
    """
    x, y = _coords(x, y)
    if np.any(ml.cdf(p.my, y) <= 0):
        raise DomainError("conditioning event {Y <= y} has probability 0")
    sx, sy = ml.survival(p.mx, x), ml.survival(p.my, y)
    return _out(ml.cdf(p.mx, x) * (1.0 + p.lam * sx * sy))


def conditional_cdf_x_given_y_eq(p: BleFgmParams, x, y):
    """P[X <= x | Y = y] = F_X [1 + lam (F_X - 1)(2F_Y - 1)]."""
    x, y = _coords(x, y)
    fx, fy = ml.cdf(p.mx, x), ml.cdf(p.my, y)
    return _out(fx * (1.0 + p.lam * (fx - 1.0) * (2.0 * fy - 1.0)))


# ---------------------------------------------------------------------------
# Rank dependence
# ---------------------------------------------------------------------------


def copula_cdf(lam: float, u, v):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return _out(u * v * (1.0 + lam * (1.0 - u) * (1.0 - v)))


def copula_log_density(lam: float, u, v):
    """ln c(u, v) = ln(1 + lam (1 - 2u)(1 - 2v)), exact near lam = 0."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return _out(np.log1p(lam * (1.0 - 2.0 * u) * (1.0 - 2.0 * v)))


def copula_covariance_integral(
    lam: float, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> QuadratureResult:
    """Integral of C(u, v) - uv over the unit square (lam / 36 analytically)."""
    return integrate_box(
        lambda u, v: copula_cdf(lam, u, v) - u * v, (0.0, 0.0), (1.0, 1.0), spec
    )


def grade_correlation(p: BleFgmParams) -> float:
    """
    Pearson correlation of (F_X(X), F_Y(Y)).

    Cov = integral of (C - uv) = lam / 36 and Var(U) = 1 / 12, so the
    correlation is lam / 3.
    """
    return p.lam / 3.0


def spearman_rho(p: BleFgmParams) -> float:
    return grade_correlation(p)


def kendall_tau(p: BleFgmParams) -> float:
    return 2.0 * p.lam / 9.0


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


def conditional_copula_quantile(lam: float, u, w):
    """
    Invert w = v (1 + a (1 - v)) for v, with a = lam (1 - 2u).

    The rationalized root 2w / ((1 + a) + sqrt((1 + a)^2 - 4 a w)) is the
    same branch as [(1 + a) - sqrt(...)] / (2a) but stays exact as a -> 0.
    """
    if not -1.0 <= lam <= 1.0:
        raise DomainError(f"|lambda| must be <= 1, got {lam}")
    u = np.asarray(u, dtype=float)
    w = np.asarray(w, dtype=float)
    if np.any((u < 0) | (u > 1) | (w < 0) | (w > 1)):
        raise DomainError("u and w must lie in [0, 1]")
    a = lam * (1.0 - 2.0 * u)
    disc = np.maximum((1.0 + a) ** 2 - 4.0 * a * w, 0.0)
    denom = (1.0 + a) + np.sqrt(disc)
    # a = -1 with w = 0 is the only 0/0 case
    with np.errstate(invalid="ignore", divide="ignore"):
        v = np.where(w > 0, 2.0 * w / denom, 0.0)
    return _out(np.clip(v, 0.0, 1.0))


def sample_pairs(p: BleFgmParams, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw an (n, 2) array of exact FGM pairs by conditional inversion."""
    uw = rng.random((n, 2))
    u, w = uw[:, 0], uw[:, 1]
    v = conditional_copula_quantile(p.lam, u, w)
    # v can round to 1.0 when w is within an ulp of 1
    v = np.minimum(v, np.nextafter(1.0, 0.0))
    return np.column_stack((ml.quantile(p.mx, u), ml.quantile(p.my, v)))


def sample_pair(p: BleFgmParams, rng: np.random.Generator) -> tuple[float, float]:
    x, y = sample_pairs(p, 1, rng)[0]
    return float(x), float(y)
