import math

import numpy as np
import pytest

from calculations.errors import DomainError, ToleranceNotMetError
from calculations.numerics import (
    QuadratureSpec,
    StepSpec,
    anti_diagonal,
    finite_diff,
    finite_diff_mixed,
    gauss_linexp_integral,
    integrate_box,
    integrate_quadrant,
    integrate_ray,
    safe_div,
    safe_pow,
    substream,
    sum_guarded,
)


# ---------------------------------------------------------------------------
# Gaussian integral
# ---------------------------------------------------------------------------


def test_gauss_integral_exponential_case():
    assert gauss_linexp_integral(2.0, 0.0) == pytest.approx(0.5, abs=1e-15)


def test_gauss_integral_rayleigh_case():
    assert gauss_linexp_integral(0.0, 1.0) == pytest.approx(math.sqrt(math.pi / 2), rel=1e-14)


TIGHT = QuadratureSpec(abs_tol=1e-12, rel_tol=1e-11)


@pytest.mark.parametrize("b", [0.01, 0.15, 1.0, 2.0])
@pytest.mark.parametrize("a", [0.0, 0.05, 0.5, 1.0, 2.0])
def test_gauss_integral_matches_quadrature(a, b):
    ref = integrate_ray(lambda t: math.exp(-(a * t + 0.5 * b * t * t)), spec=TIGHT)
    assert gauss_linexp_integral(a, b) == pytest.approx(ref.value, rel=1e-10, abs=1e-10)


def test_gauss_integral_large_ratio_does_not_overflow():
    value = gauss_linexp_integral(50.0, 1e-3)
    assert math.isfinite(value)
    assert value == pytest.approx(1.0 / 50.0, rel=1e-5)


def test_gauss_integral_vectorized():
    values = gauss_linexp_integral(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    np.testing.assert_allclose(values, [1.0, math.sqrt(math.pi / 2)], rtol=1e-14)


@pytest.mark.parametrize("a,b", [(-1.0, 1.0), (1.0, -1.0), (0.0, 0.0)])
def test_gauss_integral_rejects_bad_arguments(a, b):
    with pytest.raises(DomainError):
        gauss_linexp_integral(a, b)


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------


def test_integrate_ray_exponential():
    result = integrate_ray(lambda t: math.exp(-t))
    assert result.value == pytest.approx(1.0, abs=1e-10)
    assert result.error <= 1e-8


def test_integrate_ray_half_gaussian():
    result = integrate_ray(lambda t: math.exp(-0.5 * t * t))
    assert result.value == pytest.approx(math.sqrt(math.pi / 2), abs=1e-9)


def test_integrate_ray_reports_exhausted_budget():
    # 1 / (1 + t) is not integrable on the ray
    with pytest.raises(ToleranceNotMetError) as info:
        integrate_ray(lambda t: 1.0 / (1.0 + t), spec=QuadratureSpec(max_subdivisions=5))
    assert isinstance(info.value.estimate, float)


def test_integrate_box_reports_exhausted_budget():
    spec = QuadratureSpec(abs_tol=1e-12, rel_tol=1e-12, max_subdivisions=1)
    with pytest.raises(ToleranceNotMetError) as info:
        integrate_box(lambda x, y: np.cos(200.0 * x) * np.cos(200.0 * y), (0.0, 0.0), (1.0, 1.0), spec)
    assert math.isfinite(info.value.estimate)


def test_integrate_ray_rejects_negative_lower():
    with pytest.raises(DomainError):
        integrate_ray(lambda t: math.exp(-t), lower=-1.0)


def test_integrate_box_polynomial():
    result = integrate_box(lambda x, y: x * y, (0.0, 0.0), (1.0, 2.0))
    assert result.value == pytest.approx(1.0, abs=1e-12)


def test_integrate_quadrant_product_exponential():
    result = integrate_quadrant(lambda x, y: np.exp(-x - 2.0 * y))
    assert result.value == pytest.approx(0.5, abs=1e-8)


def test_quadrature_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(abs_tol=-1.0)
    with pytest.raises(DomainError):
        QuadratureSpec(abs_tol=0.0, rel_tol=0.0)
    with pytest.raises(DomainError):
        QuadratureSpec(max_subdivisions=0)
    assert QuadratureSpec().allowance(1e6) == pytest.approx(1e-2)


# ---------------------------------------------------------------------------
# Guarded summation
# ---------------------------------------------------------------------------


def test_sum_to_cap_geometric():
    result = sum_guarded(lambda k: 0.5**k, 60, "to_cap")
    assert result.value == pytest.approx(2.0, abs=1e-15)
    assert result.terms_used == 60
    assert not result.diverged


def test_optimal_truncation_stops_at_smallest_term():
    # k! / 10^k shrinks until k = 9; 10! / 10^10 equals 9! / 10^9 exactly
    result = sum_guarded(lambda k: math.factorial(k) / 10**k, 40)
    assert result.terms_used == 10
    assert result.first_omitted_magnitude == pytest.approx(math.factorial(10) / 10**10)
    assert not result.diverged


def test_optimal_truncation_flags_growth_from_the_start():
    result = sum_guarded(lambda k: 2.0**k, 40)
    assert result.terms_used == 1
    assert result.value == 1.0
    assert result.diverged


def test_to_cap_flags_growing_terms():
    result = sum_guarded(lambda k: 2.0**k, 5, "to_cap")
    assert result.value == 31.0
    assert result.diverged


def test_non_finite_term_is_reported_not_raised():
    result = sum_guarded(lambda k: math.inf if k == 3 else 1.0 / (k + 1) ** 4, 10)
    assert result.diverged
    assert result.terms_used == 3


def test_sum_guarded_rejects_bad_cap_and_mode():
    with pytest.raises(DomainError):
        sum_guarded(lambda k: 1.0, 0)
    with pytest.raises(DomainError):
        sum_guarded(lambda k: 1.0, 3, "sideways")


def test_anti_diagonal_double_geometric():
    collapsed = anti_diagonal(lambda m, n: 0.5**m * 0.25**n)
    result = sum_guarded(collapsed, 80, "to_cap")
    assert result.value == pytest.approx(2.0 * 4.0 / 3.0, rel=1e-14)


def test_safe_pow_saturates():
    assert safe_pow(2.0, 10) == 1024.0
    assert safe_pow(1e4, 81) == math.inf
    assert safe_pow(-1e4, 81) == -math.inf
    assert safe_div(3.0, safe_pow(1e4, 90)) == 0.0


def test_safe_div():
    assert safe_div(1.0, 0.0) == math.inf
    assert safe_div(-2.0, 0.0) == -math.inf
    assert safe_div(0.0, 0.0) == 0.0
    assert safe_div(3.0, 2.0) == 1.5


# ---------------------------------------------------------------------------
# Finite differences
# ---------------------------------------------------------------------------


def test_central_difference():
    assert finite_diff(math.sin, 1.0) == pytest.approx(math.cos(1.0), abs=1e-9)


def test_difference_at_boundary():
    with pytest.raises(DomainError):
        finite_diff(math.exp, 0.0)
    assert finite_diff(math.exp, 0.0, one_sided=True) == pytest.approx(1.0, abs=1e-8)


def test_mixed_difference_polynomial():
    value = finite_diff_mixed(lambda x, y: x * x * y**3, 1.0, 2.0)
    assert value == pytest.approx(24.0, abs=1e-5)


def test_mixed_difference_leaves_domain():
    with pytest.raises(DomainError):
        finite_diff_mixed(lambda x, y: x * y, 0.0, 1.0)


def test_mixed_difference_per_axis_steps():
    # x sits far below the scalar default step; a scaled x step stays inside
    g = lambda x, y: math.exp(-500.0 * x) * y**3  # noqa: E731
    x, y = 1e-4, 1.5
    with pytest.raises(DomainError):
        finite_diff_mixed(g, x, y)
    value = finite_diff_mixed(g, x, y, (1e-7, 1e-4))
    expected = -500.0 * math.exp(-500.0 * x) * 3.0 * y * y
    assert value == pytest.approx(expected, rel=1e-6)
    with pytest.raises(DomainError):
        finite_diff_mixed(g, x, y, (1e-7, 0.0))


def test_step_spec_validation():
    assert StepSpec() == StepSpec(1e-5, 3e-4)
    with pytest.raises(DomainError):
        StepSpec(rel_step=0.0)
    with pytest.raises(DomainError):
        StepSpec(rel_mixed_step=1.0)


# ---------------------------------------------------------------------------
# Random streams
# ---------------------------------------------------------------------------


def test_substreams_are_reproducible_and_distinct():
    a = substream(7, 3).random(4)
    b = substream(7, 3).random(4)
    c = substream(7, 4).random(4)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
