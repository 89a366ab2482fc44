"""
Bivariate Laplace transforms of the FGM density and of the renewal function.

    f*(s1, s2) = A_X(s1) A_Y(s2) + lam B_X(s1) B_Y(s2)
    A(s) = 1 - s G(s + alpha, beta)
    B(s) = s [G(s + 2 alpha, 2 beta) - G(s + alpha, beta)]
    M*(s1, s2) = f* / (s1 s2 (1 - f*))

where G is gauss_linexp_integral. B comes from f (2F - 1) = f - 2 f S and
f S being half the density of the (2 alpha, 2 beta) law.
"""

import math

import numpy as np

from calculations.errors import DomainError
from calculations.fgm_joint import BleFgmParams, joint_pdf
from calculations.marginal_linexp import LinExpParams
from calculations.numerics import (
    DEFAULT_QUADRATURE,
    QuadratureResult,
    QuadratureSpec,
    SeriesMode,
    SeriesResult,
    anti_diagonal,
    gauss_linexp_integral,
    integrate_quadrant,
    safe_div,
    safe_pow,
    sum_guarded,
)

DEFAULT_SERIES_CAP = 40

# f* this close to 1 leaves no usable digits in 1 - f*
_UNIT_GUARD = 1e-15


def _check_s(s1: float, s2: float, strict: bool = False):
    if strict and (s1 <= 0 or s2 <= 0):
        raise DomainError(f"transform arguments must be > 0, got ({s1}, {s2})")
    if s1 < 0 or s2 < 0:
        raise DomainError(f"transform arguments must be >= 0, got ({s1}, {s2})")


def _marginal_transform(m: LinExpParams, s: float) -> float:
    return 1.0 - s * gauss_linexp_integral(s + m.alpha, m.beta)


def _bracket_transform(m: LinExpParams, s: float) -> float:
    return s * (
        gauss_linexp_integral(s + 2.0 * m.alpha, 2.0 * m.beta)
        - gauss_linexp_integral(s + m.alpha, m.beta)
    )


# ---------------------------------------------------------------------------
# Density transform
# ---------------------------------------------------------------------------


def laplace_pdf(p: BleFgmParams, s1: float, s2: float) -> float:
    """Exact f*(s1, s2) for s1, s2 >= 0; f*(0, 0) = 1."""
    _check_s(s1, s2)
    a = _marginal_transform(p.mx, s1) * _marginal_transform(p.my, s2)
    b = _bracket_transform(p.mx, s1) * _bracket_transform(p.my, s2)
    return a + p.lam * b


def laplace_pdf_quadrature(
    p: BleFgmParams, s1: float, s2: float, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> QuadratureResult:
    _check_s(s1, s2)
    return integrate_quadrant(
        lambda x, y: np.exp(-s1 * x - s2 * y) * joint_pdf(p, x, y), spec
    )


def _printed_pdf_term(p: BleFgmParams, s1: float, s2: float):
    a1, b1 = p.mx.alpha, p.mx.beta
    a2, b2 = p.my.alpha, p.my.beta
    c1, c2 = s1 + a1, s2 + a2
    d1, d2 = s1 + 2.0 * a1, s2 + 2.0 * a2

    def factors(n, alpha, beta, s, c, d):
        lead = alpha * s + alpha * alpha + 2 * n * beta + beta
        doubled = alpha * s + 2.0 * alpha * alpha + 2 * n * beta + beta
        cross = safe_div(lead, safe_pow(c, 2 * n)) - safe_div(2 ** (n + 1) * doubled, safe_pow(d, 2 * n + 1))
        return lead, cross

    def term(n: int, m: int) -> float:
        pref = safe_div(
            (-1) ** (n + m)
            * safe_pow(b1, n)
            * safe_pow(b2, m)
            * math.factorial(2 * n)
            * math.factorial(2 * m),
            2 ** (n + m) * math.factorial(m) * math.factorial(n) * safe_pow(c1, 2 * n) * safe_pow(c2, 2 * m),
        )
        if pref == 0:
            return 0.0
        lead1, cross1 = factors(n, a1, b1, s1, c1, d1)
        lead2, cross2 = factors(m, a2, b2, s2, c2, d2)
        return pref * (safe_div(lead1 * lead2, c1 * c2) + p.lam * cross1 * cross2)

    return term


def laplace_pdf_series_printed(
    p: BleFgmParams,
    s1: float,
    s2: float,
    cap: int = DEFAULT_SERIES_CAP,
    mode: SeriesMode = "optimal_truncation",
) -> SeriesResult:
    """
    The published double series for f*, summed along anti-diagonals.

    Its denominators carry (s + alpha)^(2n) where the integral produces
    (s + alpha)^(2n + 1), so with beta = 0 and lam = 0 it returns
    alpha_1 alpha_2 instead of the exponential transform. Kept for
    reproduction; laplace_pdf is the reference.
    """
    _check_s(s1, s2)
    return sum_guarded(anti_diagonal(_printed_pdf_term(p, s1, s2)), cap, mode)


# ---------------------------------------------------------------------------
# Renewal function transform
# ---------------------------------------------------------------------------


def _renewal_from_pdf(f_star: float, s1: float, s2: float) -> float:
    return f_star / (s1 * s2 * (1.0 - f_star))


def renewal_transform(p: BleFgmParams, s1: float, s2: float) -> float:
    """
    M*(s1, s2) = f* / (s1 s2 (1 - f*)) from the exact f*.

    Raises:
        DomainError: s1 or s2 not positive, or f* numerically equal to 1.
    """
    _check_s(s1, s2, strict=True)
    f_star = laplace_pdf(p, s1, s2)
    if f_star >= 1.0 - _UNIT_GUARD:
        raise DomainError(f"f*({s1}, {s2}) = {f_star!r} leaves no room for 1 - f*")
    return _renewal_from_pdf(f_star, s1, s2)


def renewal_transform_series_printed(
    p: BleFgmParams,
    s1: float,
    s2: float,
    cap: int = DEFAULT_SERIES_CAP,
    mode: SeriesMode = "optimal_truncation",
) -> SeriesResult:
    """
    M* built from the printed f* series.

    Diagnostics are those of the underlying f* series; a series value at or
    above 1 yields a NaN value flagged as diverged.
    """
    _check_s(s1, s2, strict=True)
    series = laplace_pdf_series_printed(p, s1, s2, cap, mode)
    if not math.isfinite(series.value) or series.value >= 1.0 - _UNIT_GUARD:
        return SeriesResult(math.nan, series.terms_used, series.first_omitted_magnitude, True)
    return SeriesResult(
        _renewal_from_pdf(series.value, s1, s2),
        series.terms_used,
        series.first_omitted_magnitude,
        series.diverged,
    )
