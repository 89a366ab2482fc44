import math

import pytest

from calculations import transforms as tr
from calculations.errors import DomainError
from calculations.fgm_joint import BleFgmParams


def test_transform_at_origin(joint_cdf_params, lam):
    assert tr.laplace_pdf(joint_cdf_params(lam), 0.0, 0.0) == 1.0


def test_exponential_transform_product():
    p = BleFgmParams.from_rates(2.0, 0.0, 0.5, 0.0, 0.0)
    expected = (2.0 / (1.5 + 2.0)) * (0.5 / (3.0 + 0.5))
    assert tr.laplace_pdf(p, 1.5, 3.0) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("s", [(1.0, 2.0), (0.5, 0.5), (3.0, 0.25)])
def test_exact_matches_quadrature(joint_cdf_params, s):
    p = joint_cdf_params(0.5)
    oracle = tr.laplace_pdf_quadrature(p, *s)
    assert tr.laplace_pdf(p, *s) == pytest.approx(oracle.value, abs=1e-8)


def test_transform_decreases_in_each_argument(reliability_params, lam):
    p = reliability_params(lam)
    values = [tr.laplace_pdf(p, s, 1.0) for s in (0.1, 0.5, 1.0, 4.0)]
    assert values == sorted(values, reverse=True)
    assert all(0.0 < v <= 1.0 for v in values)


def test_negative_argument_rejected(joint_cdf_params):
    with pytest.raises(DomainError):
        tr.laplace_pdf(joint_cdf_params(), -0.1, 1.0)


# ---------------------------------------------------------------------------
# Printed series
# ---------------------------------------------------------------------------


def test_printed_series_exponential_slice():
    p = BleFgmParams.from_rates(2.0, 0.0, 0.5, 0.0, 0.0)
    result = tr.laplace_pdf_series_printed(p, 1.5, 3.0)
    assert result.value == pytest.approx(2.0 * 0.5, rel=1e-14)
    assert result.value != pytest.approx(tr.laplace_pdf(p, 1.5, 3.0))


def test_printed_series_single_term(reliability_params):
    p = reliability_params(0.5)
    single = tr.laplace_pdf_series_printed(p, 1.0, 1.0, cap=1)
    assert single.terms_used == 1
    assert single.value == tr._printed_pdf_term(p, 1.0, 1.0)(0, 0)


def test_printed_series_reports_diagnostics(reliability_params):
    result = tr.laplace_pdf_series_printed(reliability_params(0.5), 1.0, 1.0)
    assert result.terms_used >= 1
    assert math.isfinite(result.first_omitted_magnitude) or result.diverged


# ---------------------------------------------------------------------------
# Renewal transform
# ---------------------------------------------------------------------------


def test_renewal_transform_unit_exponential(exponential_params):
    p = exponential_params(0.0)
    assert tr.laplace_pdf(p, 1.0, 1.0) == pytest.approx(0.25, rel=1e-15)
    assert tr.renewal_transform(p, 1.0, 1.0) == pytest.approx(1.0 / 3.0, rel=1e-14)


def test_renewal_transform_identity(joint_cdf_params):
    p = joint_cdf_params(-0.5)
    m_star = tr.renewal_transform(p, 2.0, 3.0)
    f_star = tr.laplace_pdf(p, 2.0, 3.0)
    assert 2.0 * 3.0 * m_star * (1.0 - f_star) == pytest.approx(f_star, abs=1e-12)


def test_renewal_transform_decays(joint_cdf_params):
    p = joint_cdf_params(0.5)
    assert tr.renewal_transform(p, 1.0, 1.0) > tr.renewal_transform(p, 2.0, 2.0) > 0.0


@pytest.mark.parametrize("s", [(0.0, 1.0), (1.0, 0.0), (-1.0, 1.0)])
def test_renewal_transform_needs_positive_arguments(joint_cdf_params, s):
    with pytest.raises(DomainError):
        tr.renewal_transform(joint_cdf_params(), *s)


def test_renewal_transform_unit_guard(joint_cdf_params):
    with pytest.raises(DomainError):
        tr.renewal_transform(joint_cdf_params(), 1e-18, 1e-18)


def test_printed_renewal_series_flags_unit_value(exponential_params):
    # the printed slice gives f* = alpha_1 alpha_2 = 1 here
    result = tr.renewal_transform_series_printed(exponential_params(0.0), 1.0, 1.0)
    assert math.isnan(result.value)
    assert result.diverged
