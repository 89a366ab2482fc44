"""
Oracle suite: every closed form is checked against an independent
evaluation (quadrature, finite differences, brute-force sweeps, algebraic
identities).

Each check yields a ValidationRecord with status ``pass``, ``fail`` or
``documented_discrepancy``. The last status marks the published series
whose exponents differ from term-by-term integration; a mismatch there is
expected and reported, not failed.
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Callable, Literal

import numpy as np
from scipy.stats import qmc

from calculations import dependence, extremes, moments, transforms
from calculations import marginal_linexp as ml
from calculations.errors import FgmError
from calculations.failure_process import cumulative_intensity, cumulative_intensity_series_printed
from calculations.fgm_joint import (
    BleFgmParams,
    copula_covariance_integral,
    copula_log_density,
    joint_cdf,
    joint_pdf,
    joint_survival,
)
from calculations.numerics import (
    DEFAULT_QUADRATURE,
    DEFAULT_STEPS,
    QuadratureSpec,
    StepSpec,
    finite_diff,
    finite_diff_mixed,
    integrate_quadrant,
)

logger = logging.getLogger(__name__)

Status = Literal["pass", "fail", "documented_discrepancy"]

DERIVATIVE_TOL = 1e-5
TRANSFORM_POINTS = ((0.5, 0.5), (1.0, 2.0), (2.0, 1.0), (3.0, 3.0), (0.25, 4.0))


@dataclass(frozen=True)
class ValidationRecord:
    check_id: str
    formula: str
    status: Status
    measured: float
    tolerance: float

    def as_dict(self) -> dict:
        return asdict(self)


def _strict(check_id: str, formula: str, measured: float, tolerance: float) -> ValidationRecord:
    status = "pass" if measured <= tolerance else "fail"
    return ValidationRecord(check_id, formula, status, float(measured), tolerance)


def _errata(check_id: str, formula: str, measured: float, tolerance: float) -> ValidationRecord:
    status = "pass" if measured <= tolerance else "documented_discrepancy"
    return ValidationRecord(check_id, formula, status, float(measured), tolerance)


def _scaled_error(closed: float, oracle: float) -> float:
    return abs(closed - oracle) / max(1.0, abs(closed))


# ---------------------------------------------------------------------------
# Test points
# ---------------------------------------------------------------------------


def quasi_random_points(p: BleFgmParams, count: int = 50) -> np.ndarray:
    """
    Halton points mapped through the marginal quantiles at levels 5%..95%.

    Returns a (count, 2) array of (x, y) pairs.
    """
    sampler = qmc.Halton(d=2, scramble=False)
    sampler.fast_forward(1)  # the first unscrambled point is the origin
    levels = 0.05 + 0.9 * sampler.random(count)
    return np.column_stack(
        (ml.quantile(p.mx, levels[:, 0]), ml.quantile(p.my, levels[:, 1]))
    )


def _max_error(points, closed: Callable, oracle: Callable) -> float:
    return max(_scaled_error(closed(*pt), oracle(*pt)) for pt in points)


# ---------------------------------------------------------------------------
# Check groups
# ---------------------------------------------------------------------------


def _distribution_checks(p: BleFgmParams, spec: QuadratureSpec) -> list[ValidationRecord]:
    mass = integrate_quadrant(lambda x, y: joint_pdf(p, x, y), spec)
    cov = copula_covariance_integral(p.lam, spec)

    p0 = p.with_lambda(0.0)
    grid = np.linspace(0.0, 4.0 * max(ml.mean(p.mx), ml.mean(p.my)), 21)
    xs, ys = np.meshgrid(grid, grid, indexing="ij")
    factor_error = max(
        float(np.max(np.abs(joint_cdf(p0, xs, ys) - ml.cdf(p.mx, xs) * ml.cdf(p.my, ys)))),
        float(np.max(np.abs(joint_pdf(p0, xs, ys) - ml.pdf(p.mx, xs) * ml.pdf(p.my, ys)))),
        float(
            np.max(np.abs(joint_survival(p0, xs, ys) - ml.survival(p.mx, xs) * ml.survival(p.my, ys)))
        ),
    )
    return [
        _strict("pdf_normalization", "double integral of the joint density = 1", abs(mass.value - 1.0), 1e-6),
        _strict("copula_covariance", "integral of C(u,v) - uv = lambda / 36", abs(cov.value - p.lam / 36.0), 1e-8),
        _strict("independence_factorization", "lambda = 0 factorizes cdf, pdf, survival", factor_error, 1e-15),
    ]


def _derivative_checks(p: BleFgmParams, points: np.ndarray, steps: StepSpec) -> list[ValidationRecord]:
    times = points[:, 0]
    # steps follow each marginal's median so high hazard rates keep the
    # stencil inside the quadrant
    scale_x = ml.quantile(p.mx, 0.5)
    scale_y = ml.quantile(p.my, 0.5)
    hx = steps.rel_step * scale_x
    hy = steps.rel_step * scale_y
    ht = steps.rel_step * min(scale_x, scale_y)
    mixed = (steps.rel_mixed_step * scale_x, steps.rel_mixed_step * scale_y)

    def log_cdf_max(t):
        return math.log(extremes.cdf_max(p, t))

    def neg_log_survival_min(t):
        return -math.log(extremes.survival_min(p, t))

    rh_err = max(
        _scaled_error(extremes.reversed_hazard_max(p, t), finite_diff(log_cdf_max, t, ht))
        for t in times
    )
    hm_err = max(
        _scaled_error(extremes.hazard_min(p, t), finite_diff(neg_log_survival_min, t, ht))
        for t in times
    )

    # ln f minus the separable marginal terms; same mixed partial, no cancellation
    def log_copula_density(x, y):
        return copula_log_density(p.lam, ml.cdf(p.mx, x), ml.cdf(p.my, y))

    def neg_log_surv(x, y):
        return -math.log(joint_survival(p, x, y))

    gamma_err = _max_error(
        points,
        lambda x, y: dependence.local_dependence(p, x, y),
        lambda x, y: finite_diff_mixed(log_copula_density, x, y, mixed),
    )
    h1_err = _max_error(
        points,
        lambda x, y: dependence.hazard_gradient(p, x, y)[0],
        lambda x, y: finite_diff(lambda u: neg_log_surv(u, y), x, hx),
    )
    h2_err = _max_error(
        points,
        lambda x, y: dependence.hazard_gradient(p, x, y)[1],
        lambda x, y: finite_diff(lambda v: neg_log_surv(x, v), y, hy),
    )
    partial_err = max(
        _max_error(
            points,
            lambda x, y: dependence.survival_partial_x(p, x, y),
            lambda x, y: finite_diff(lambda u: joint_survival(p, u, y), x, hx),
        ),
        _max_error(
            points,
            lambda x, y: dependence.survival_partial_y(p, x, y),
            lambda x, y: finite_diff(lambda v: joint_survival(p, x, v), y, hy),
        ),
    )
    tol = DERIVATIVE_TOL
    return [
        _strict("reversed_hazard_max", "rh of max = d/dt ln F(t, t)", rh_err, tol),
        _strict("hazard_min", "h of min = -d/dt ln S(t, t)", hm_err, tol),
        _strict("local_dependence", "gamma = d2/dxdy ln f", gamma_err, tol),
        _strict("hazard_gradient_x", "h1 = -d/dx ln S(x, y)", h1_err, tol),
        _strict("hazard_gradient_y", "h2 = -d/dy ln S(x, y)", h2_err, tol),
        _strict("survival_partials", "closed-form dS/dx, dS/dy vs differences", partial_err, tol),
    ]


def _mttf_checks(p: BleFgmParams, spec: QuadratureSpec, cap: int) -> list[ValidationRecord]:
    exact = moments.mttf_exact(p)
    quad = moments.mttf_quadrature(p, spec)
    records = [
        _strict(
            "mttf_quadrature",
            "MTTF exact vs 2-D quadrature of the joint survival",
            abs(exact - quad.value),
            max(quad.error, 1e-6 * abs(exact)),
        )
    ]

    printed = moments.mttf_series_printed(p, cap)
    records.append(
        _errata(
            "mttf_series_printed",
            "published MTTF double series vs exact",
            abs(printed.value - exact) / abs(exact),
            1e-6,
        )
    )

    if p.mx.alpha > 0 and p.my.alpha > 0:
        corrected = moments.mttf_series_corrected(p, cap)
        # the propagated bound is rigorous, so exceeding it is a real failure
        records.append(
            _strict(
                "mttf_series_corrected",
                "corrected series within its remainder bound",
                abs(corrected.value - exact),
                corrected.first_omitted_magnitude + 1e-12 * abs(exact),
            )
        )
    return records


def _transform_checks(p: BleFgmParams, spec: QuadratureSpec, cap: int) -> list[ValidationRecord]:
    origin = abs(transforms.laplace_pdf(p, 0.0, 0.0) - 1.0)
    quad_err = max(
        abs(transforms.laplace_pdf(p, s1, s2) - transforms.laplace_pdf_quadrature(p, s1, s2, spec).value)
        for s1, s2 in TRANSFORM_POINTS
    )
    identity_err = 0.0
    printed_err = 0.0
    for s1, s2 in TRANSFORM_POINTS:
        f_star = transforms.laplace_pdf(p, s1, s2)
        m_star = transforms.renewal_transform(p, s1, s2)
        identity_err = max(identity_err, abs(s1 * s2 * m_star * (1.0 - f_star) - f_star))
        series = transforms.laplace_pdf_series_printed(p, s1, s2, cap)
        printed_err = max(printed_err, abs(series.value - f_star))
    return [
        _strict("laplace_origin", "f*(0, 0) = 1", origin, 1e-12),
        _strict("laplace_quadrature", "exact f* vs quadrature", quad_err, 1e-8),
        _strict("renewal_transform_identity", "s1 s2 M* (1 - f*) = f*", identity_err, 1e-12),
        _errata("laplace_series_printed", "published f* double series vs exact", printed_err, 1e-8),
    ]


INTENSITY_LEVEL = 0.15


def _intensity_checks(p: BleFgmParams, spec: QuadratureSpec) -> list[ValidationRecord]:
    # the five-index series is a power series in F_X and F_Y, so the corner
    # is placed at a fixed marginal level rather than a fixed time
    x = ml.quantile(p.mx, INTENSITY_LEVEL)
    y = ml.quantile(p.my, INTENSITY_LEVEL)
    reference = cumulative_intensity(p, x, y, spec).value
    series = cumulative_intensity_series_printed(p, x, y)
    rel = abs(series.value - reference) / reference if reference > 0 else abs(series.value)
    return [
        _strict(
            "intensity_series_printed",
            f"Lambda series vs quadrature at the {INTENSITY_LEVEL:g} marginal quantiles",
            rel,
            0.05,
        )
    ]


def _dependence_checks(p: BleFgmParams) -> list[ValidationRecord]:
    label = dependence.classify_tp2(p)
    sweep = label.sweep
    measured = -sweep.min_det if label.classification != "RR2" else sweep.max_det
    if label.classification == "independent":
        measured = max(abs(sweep.min_det), abs(sweep.max_det))
    xs, ys = dependence.default_sweep_grid(p)
    mono = dependence.conditional_hazard_monotonicity(p, xs, ys)
    worst = abs(mono.worst_step) if not mono.holds else 0.0
    return [
        ValidationRecord(
            f"tp2_sweep_{label.classification.lower()}",
            "2x2 density determinants agree with the sign of lambda",
            "pass" if label.sweep_consistent else "fail",
            float(max(measured, 0.0)),
            1e-12,
        ),
        ValidationRecord(
            "conditional_hazard_monotonicity",
            f"h1(x, .) is {mono.direction} in y",
            "pass" if mono.holds else "fail",
            worst,
            1e-12,
        ),
    ]


# ---------------------------------------------------------------------------
# Suite
# ---------------------------------------------------------------------------


def run_validation(
    p: BleFgmParams,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    cap: int = moments.DEFAULT_SERIES_CAP,
    points: int = 50,
    steps: StepSpec = DEFAULT_STEPS,
) -> list[ValidationRecord]:
    """
    Run every oracle check for one parameter set.

    Any package error inside a check group (a quadrature that runs out of
    budget, a domain guard) becomes a single ``fail`` record named after
    the group, and the remaining groups still run.
    """
    sample = quasi_random_points(p, points)
    groups = (
        ("distribution", lambda: _distribution_checks(p, spec)),
        ("derivatives", lambda: _derivative_checks(p, sample, steps)),
        ("mttf", lambda: _mttf_checks(p, spec, cap)),
        ("transforms", lambda: _transform_checks(p, spec, cap)),
        ("intensity", lambda: _intensity_checks(p, spec)),
        ("dependence", lambda: _dependence_checks(p)),
    )
    records: list[ValidationRecord] = []
    for name, run in groups:
        try:
            records.extend(run())
        except FgmError as exc:
            logger.error("validation group %s aborted: %s", name, exc)
            records.append(ValidationRecord(name, str(exc), "fail", math.nan, math.nan))

    for rec in records:
        if rec.status == "documented_discrepancy":
            logger.warning("%s: documented discrepancy (%.3g)", rec.check_id, rec.measured)
    return records


def has_failures(records: list[ValidationRecord]) -> bool:
    return any(rec.status == "fail" for rec in records)
