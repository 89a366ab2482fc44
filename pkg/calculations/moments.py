"""
MTTF (the product moment E[XY] = double integral of the joint survival)
and the marginal integrals it factors into.

    MTTF = I_X I_Y + lam K_X K_Y
    I = integral of (1 - F),  K = integral of F (1 - F)

Four evaluation paths are provided: exact erfc forms, 2-D quadrature, the
printed double series (reproduced verbatim, exponents and all) and the
term-by-term series with corrected exponents.
"""

import logging
import math
from dataclasses import dataclass

from calculations.errors import DomainError, NumericalError
from calculations.fgm_joint import BleFgmParams, joint_survival
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

logger = logging.getLogger(__name__)

DEFAULT_SERIES_CAP = 40


@dataclass(frozen=True)
class MttfReport:
    exact: float
    quadrature: float
    quadrature_error: float
    series_printed: SeriesResult
    series_corrected: SeriesResult | None

    def as_dict(self) -> dict:
        return {
            "exact": self.exact,
            "quadrature": self.quadrature,
            "quadrature_error": self.quadrature_error,
            "series_printed": self.series_printed.as_dict(),
            "series_corrected": (
                self.series_corrected.as_dict() if self.series_corrected else None
            ),
        }


def _double_factorial_odd(m: int) -> float:
    """(2m)! / (2^m m!) = (2m - 1)!!."""
    return math.factorial(2 * m) // (2**m * math.factorial(m))


# ---------------------------------------------------------------------------
# Exact marginal integrals
# ---------------------------------------------------------------------------


def tail_integral_exact(m: LinExpParams) -> float:
    """Integral of the survival function (the marginal mean)."""
    return gauss_linexp_integral(m.alpha, m.beta)


def cdf_tail_product_integral_exact(m: LinExpParams) -> float:
    """Integral of F (1 - F) = G(alpha, beta) - G(2 alpha, 2 beta)."""
    return gauss_linexp_integral(m.alpha, m.beta) - gauss_linexp_integral(
        2.0 * m.alpha, 2.0 * m.beta
    )


def mttf_exact(p: BleFgmParams) -> float:
    i_x, i_y = tail_integral_exact(p.mx), tail_integral_exact(p.my)
    k_x, k_y = cdf_tail_product_integral_exact(p.mx), cdf_tail_product_integral_exact(p.my)
    return i_x * i_y + p.lam * k_x * k_y


def mttf_quadrature(
    p: BleFgmParams, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> QuadratureResult:
    return integrate_quadrant(lambda x, y: joint_survival(p, x, y), spec)


# ---------------------------------------------------------------------------
# Printed double series
# ---------------------------------------------------------------------------


def _printed_term(p: BleFgmParams):
    a1, b1 = p.mx.alpha, p.mx.beta
    a2, b2 = p.my.alpha, p.my.beta

    def term(m: int, n: int) -> float:
        num = (
            (-1) ** (m + n)
            * safe_pow(b1, m)
            * safe_pow(b2, n)
            * _double_factorial_odd(m)
            * _double_factorial_odd(n)
        )
        base = safe_div(num, safe_pow(a1, 2 * m) * safe_pow(a2, 2 * n))
        bracket = 1.0 + p.lam * (2**m - 1) * (2**n - 1) / 2 ** (m + n)
        return base * bracket

    return term


def mttf_series_printed(
    p: BleFgmParams,
    cap: int = DEFAULT_SERIES_CAP,
    mode: SeriesMode = "optimal_truncation",
) -> SeriesResult:
    """
    Evaluate the published MTTF double series term for term.

    The published denominators carry alpha^(2m) where term-by-term
    integration gives alpha^(2m + 1); at beta = 0 only the (0, 0) term
    survives and the series returns exactly 1. Nothing here asserts
    agreement with mttf_exact.
    """
    result = sum_guarded(anti_diagonal(_printed_term(p)), cap, mode)
    if result.diverged:
        logger.warning(
            "printed MTTF series diverged after %d terms (next magnitude %.3g)",
            result.terms_used,
            result.first_omitted_magnitude,
        )
    return result


# ---------------------------------------------------------------------------
# Corrected series
# ---------------------------------------------------------------------------


def _tail_term(m: LinExpParams):
    """a_k = (-1)^k beta^k (2k)! / (2^k k! alpha^(2k + 1))."""

    def term(k: int) -> float:
        num = (-1) ** k * safe_pow(m.beta, k) * _double_factorial_odd(k)
        return safe_div(num, safe_pow(m.alpha, 2 * k + 1))

    return term


def _require_alpha(m: LinExpParams):
    if m.alpha <= 0:
        raise DomainError("the exponential-based series needs alpha > 0")


def tail_integral_series(
    m: LinExpParams, cap: int = DEFAULT_SERIES_CAP, mode: SeriesMode = "optimal_truncation"
) -> SeriesResult:
    """
    Asymptotic series for the integral of (1 - F).

    Truncation error never exceeds the first omitted term: the remainder of
    the exponential Taylor series alternates and stays below its next term.
    """
    _require_alpha(m)
    return sum_guarded(_tail_term(m), cap, mode)


def cdf_tail_product_series(
    m: LinExpParams, cap: int = DEFAULT_SERIES_CAP, mode: SeriesMode = "optimal_truncation"
) -> SeriesResult:
    """
    Asymptotic series for the integral of F (1 - F).

    Terms are a_k (2^(k+1) - 1) / 2^(k+1). The remainder is the difference
    of two same-signed remainders bounded by a_M and a_M / 2^(M+1), so the
    reported first_omitted_magnitude is |a_M|, a bound on the true error.
    """
    _require_alpha(m)
    base = _tail_term(m)

    def term(k: int) -> float:
        return base(k) * (2 ** (k + 1) - 1) / 2 ** (k + 1)

    result = sum_guarded(term, cap, mode)
    bound = abs(base(result.terms_used))
    return SeriesResult(
        result.value,
        result.terms_used,
        bound if math.isfinite(bound) else math.inf,
        result.diverged,
    )


def mttf_series_corrected(
    p: BleFgmParams,
    cap: int = DEFAULT_SERIES_CAP,
    mode: SeriesMode = "optimal_truncation",
) -> SeriesResult:
    """
    MTTF from the corrected marginal series, I_X I_Y + lam K_X K_Y.

    Each factor is truncated on its own; first_omitted_magnitude is the
    remainder bound propagated through the two products.
    """
    i_x, i_y = tail_integral_series(p.mx, cap, mode), tail_integral_series(p.my, cap, mode)
    k_x, k_y = cdf_tail_product_series(p.mx, cap, mode), cdf_tail_product_series(p.my, cap, mode)

    def product_bound(a: SeriesResult, b: SeriesResult) -> float:
        ea, eb = a.first_omitted_magnitude, b.first_omitted_magnitude
        return abs(a.value) * eb + abs(b.value) * ea + ea * eb

    value = i_x.value * i_y.value + p.lam * k_x.value * k_y.value
    bound = product_bound(i_x, i_y) + abs(p.lam) * product_bound(k_x, k_y)
    factors = (i_x, i_y, k_x, k_y)
    return SeriesResult(
        value,
        max(f.terms_used for f in factors),
        bound,
        any(f.diverged for f in factors),
    )


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------


def mttf_report(
    p: BleFgmParams,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    cap: int = DEFAULT_SERIES_CAP,
    agreement_rel_tol: float = 1e-6,
) -> MttfReport:
    """
    Bundle the exact, quadrature, printed-series and corrected-series MTTF.

    Raises:
        ToleranceNotMetError: the 2-D quadrature failed.
        NumericalError: exact and quadrature values disagree beyond the
            quadrature error (or agreement_rel_tol relative).
    """
    exact = mttf_exact(p)
    quadrature = mttf_quadrature(p, spec)
    printed = mttf_series_printed(p, cap)
    corrected = None
    if p.mx.alpha > 0 and p.my.alpha > 0:
        corrected = mttf_series_corrected(p, cap)

    report = MttfReport(exact, quadrature.value, quadrature.error, printed, corrected)
    allowed = max(quadrature.error, agreement_rel_tol * abs(exact))
    if abs(exact - quadrature.value) > allowed:
        err = NumericalError(
            f"MTTF exact {exact:.12g} and quadrature {quadrature.value:.12g} "
            f"differ by more than {allowed:.3g}"
        )
        err.report = report
        raise err
    return report
