import math

import numpy as np
import pytest

from calculations import extremes as ex
from calculations import fgm_joint as fj
from calculations import marginal_linexp as ml
from calculations.errors import CurveInvariantError, DomainError
from calculations.numerics import finite_diff

T_GRID = np.linspace(0.0, 5.0, 51)


def test_diagonal_consistency(joint_cdf_params, lam):
    p = joint_cdf_params(lam)
    np.testing.assert_array_equal(ex.cdf_max(p, T_GRID), fj.joint_cdf(p, T_GRID, T_GRID))
    np.testing.assert_array_equal(
        ex.survival_min(p, T_GRID), fj.joint_survival(p, T_GRID, T_GRID)
    )


def test_boundaries(joint_cdf_params, lam):
    p = joint_cdf_params(lam)
    assert ex.cdf_max(p, 0.0) == 0.0
    assert ex.survival_min(p, 0.0) == 1.0
    assert ex.hazard_min(p, 0.0) == pytest.approx(0.5 + 0.7, rel=1e-15)


def test_independent_rates_add(joint_cdf_params):
    p = joint_cdf_params(0.0)
    t = 1.7
    assert ex.reversed_hazard_max(p, t) == pytest.approx(
        ml.reversed_hazard(p.mx, t) + ml.reversed_hazard(p.my, t), rel=1e-15
    )
    assert ex.hazard_min(p, t) == pytest.approx((0.5 + 0.7) + (1.5 + 2.0) * t, rel=1e-15)


@pytest.mark.parametrize("lam_", [-1.0, -0.5, 0.5, 1.0])
def test_rates_are_log_derivatives(joint_cdf_params, reliability_params, lam_):
    for p in (joint_cdf_params(lam_), reliability_params(lam_)):
        for t in np.linspace(0.1, 3.0, 12):
            rev = finite_diff(lambda s: math.log(ex.cdf_max(p, s)), t)
            haz = -finite_diff(lambda s: math.log(ex.survival_min(p, s)), t)
            assert ex.reversed_hazard_max(p, t) == pytest.approx(rev, abs=1e-5)
            assert ex.hazard_min(p, t) == pytest.approx(haz, abs=1e-5)


def test_symmetric_marginals_reduction():
    p = fj.BleFgmParams.from_rates(0.5, 1.5, 0.5, 1.5, 0.7)
    t = 1.0
    f, s = ml.pdf(p.mx, t), ml.survival(p.mx, t)
    expected = 2.0 * ml.reversed_hazard(p.mx, t) - 0.7 * 2.0 * f * s / (1.0 + 0.7 * s * s)
    assert ex.reversed_hazard_max(p, t) == pytest.approx(expected, rel=1e-12)


def test_reversed_hazard_max_needs_positive_time(joint_cdf_params):
    with pytest.raises(DomainError):
        ex.reversed_hazard_max(joint_cdf_params(), 0.0)


def test_survival_min_by_sampling(joint_cdf_params, rng):
    p = joint_cdf_params(0.5)
    pairs = fj.sample_pairs(p, 1_000_000, rng)
    hit = np.mean(pairs.min(axis=1) > 1.0)
    expected = ex.survival_min(p, 1.0)
    se = math.sqrt(expected * (1.0 - expected) / pairs.shape[0])
    assert abs(hit - expected) < 3 * se


# ---------------------------------------------------------------------------
# Curves
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("lam_", [-1.0, 0.0, 1.0])
def test_parallel_cdf_curves(joint_cdf_params, lam_):
    curve = ex.extreme_curve(joint_cdf_params(lam_), "cdf_max", T_GRID)
    assert curve.values.min() >= 0.0
    assert curve.values.max() <= 1.0
    assert np.all(np.diff(curve.values) >= 0.0)
    assert ex.classify_monotonicity(curve) == "increasing"


def test_survival_min_curve_is_decreasing(reliability_params):
    curve = ex.extreme_curve(reliability_params(-1.0), "survival_min", np.linspace(0, 10, 41))
    assert ex.classify_monotonicity(curve) == "decreasing"


def test_independent_hazard_min_curve_is_affine(joint_cdf_params):
    curve = ex.extreme_curve(joint_cdf_params(0.0), "hazard_min", T_GRID)
    second = np.diff(curve.values, 2)
    np.testing.assert_allclose(second, 0.0, atol=1e-12)


def test_curve_reports_grid_index(joint_cdf_params):
    with pytest.raises(DomainError) as excinfo:
        ex.extreme_curve(joint_cdf_params(), "rev_hazard_max", [0.0, 1.0, 2.0])
    assert excinfo.value.index == 0
    assert "grid index 0" in str(excinfo.value)


def test_hazard_min_underflow_index(joint_cdf_params):
    with pytest.raises(DomainError) as excinfo:
        ex.extreme_curve(joint_cdf_params(), "hazard_min", [1.0, 2.0, 60.0])
    assert excinfo.value.index == 2


@pytest.mark.parametrize("grid", [[], [1.0, 1.0], [2.0, 1.0], [-1.0, 0.0]])
def test_curve_rejects_bad_grid(joint_cdf_params, grid):
    with pytest.raises(DomainError):
        ex.extreme_curve(joint_cdf_params(), "cdf_max", grid)


def test_curve_rejects_unknown_kind(joint_cdf_params):
    with pytest.raises(DomainError):
        ex.extreme_curve(joint_cdf_params(), "median_max", T_GRID)


def test_curve_invariant_violation(monkeypatch, joint_cdf_params):
    monkeypatch.setitem(ex._EVALUATORS, "cdf_max", lambda p, t: 0.5 - 0.1 * t)
    with pytest.raises(CurveInvariantError) as excinfo:
        ex.extreme_curve(joint_cdf_params(), "cdf_max", [0.0, 1.0, 2.0])
    assert excinfo.value.index == 1


def test_curve_noise_is_repaired(monkeypatch, joint_cdf_params):
    monkeypatch.setitem(ex._EVALUATORS, "cdf_max", lambda p, t: [0.2, 0.2 - 1e-14, 0.3][int(t)])
    curve = ex.extreme_curve(joint_cdf_params(), "cdf_max", [0.0, 1.0, 2.0])
    np.testing.assert_array_equal(curve.values, [0.2, 0.2, 0.3])


def test_classify_monotonicity_shapes():
    grid = np.arange(4.0)
    make = lambda values: ex.ExtremeCurve(grid, np.asarray(values, float), "hazard_min")  # noqa: E731
    assert ex.classify_monotonicity(make([1, 1, 1, 1])) == "constant"
    assert ex.classify_monotonicity(make([1, 2, 1, 2])) == "non_monotone"
    assert ex.classify_monotonicity(make([3, 2, 2, 1])) == "decreasing"
