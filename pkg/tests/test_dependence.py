import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import qmc

from calculations import dependence as dep
from calculations import fgm_joint as fj
from calculations import marginal_linexp as ml
from calculations.errors import DomainError
from calculations.numerics import finite_diff, finite_diff_mixed


# ---------------------------------------------------------------------------
# Local dependence
# ---------------------------------------------------------------------------


def test_local_dependence_vanishes_under_independence(joint_cdf_params):
    x, y = np.meshgrid(np.linspace(0.0, 3.0, 7), np.linspace(0.0, 3.0, 7))
    np.testing.assert_array_equal(dep.local_dependence(joint_cdf_params(0.0), x, y), 0.0)


def test_local_dependence_at_origin(joint_cdf_params):
    lam = 0.5
    expected = 4.0 * lam * 0.5 * 0.7 / (1.0 + lam) ** 2
    assert dep.local_dependence(joint_cdf_params(lam), 0.0, 0.0) == pytest.approx(expected)


def test_local_dependence_matches_stencil(joint_cdf_params):
    p = joint_cdf_params(0.5)
    numeric = finite_diff_mixed(lambda a, b: math.log(fj.joint_pdf(p, a, b)), 0.3, 0.4)
    assert dep.local_dependence(p, 0.3, 0.4) == pytest.approx(numeric, abs=1e-5)


@pytest.mark.parametrize("lam_", [-1.0, -0.5, 0.5, 1.0])
def test_local_dependence_sign_follows_lambda(joint_cdf_params, lam_):
    p = joint_cdf_params(lam_)
    points = qmc.Halton(d=2, scramble=False).random(200) * 4.0 + 0.01
    gamma = dep.local_dependence(p, points[:, 0], points[:, 1])
    assert np.all(np.sign(gamma) == np.sign(lam_))


def test_local_dependence_zero_density(joint_cdf_params):
    with pytest.raises(DomainError):
        dep.local_dependence(joint_cdf_params(-1.0), 0.0, 0.0)


# ---------------------------------------------------------------------------
# TP2 / RR2
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "lam_,label,sign",
    [(0.5, "TP2", "positive"), (0.0, "independent", "zero"), (-1.0, "RR2", "negative")],
)
def test_classification(joint_cdf_params, lam_, label, sign):
    result = dep.classify_tp2(joint_cdf_params(lam_))
    assert result.classification == label
    assert result.gamma_sign == sign
    assert result.sweep_consistent


def test_rr2_determinant_sweep(joint_cdf_params):
    p = joint_cdf_params(-1.0)
    grid = np.linspace(0.1, 3.0, 10)
    sweep = dep.tp2_determinant_sweep(p, grid, grid)
    assert sweep.pairs == 45 * 45
    assert sweep.max_det <= 1e-12


def test_tp2_sweep_on_custom_grid(reliability_params):
    grid = np.linspace(0.5, 20.0, 8)
    result = dep.classify_tp2(reliability_params(1.0), grid, grid)
    assert result.sweep.min_det >= -1e-12
    assert result.sweep_consistent


def test_sweep_needs_two_points(joint_cdf_params):
    with pytest.raises(DomainError):
        dep.tp2_determinant_sweep(joint_cdf_params(), [1.0], [1.0, 2.0])


def test_default_sweep_grid_spans_quantiles(joint_cdf_params):
    p = joint_cdf_params()
    xs, ys = dep.default_sweep_grid(p, count=5)
    assert ml.cdf(p.mx, xs[0]) == pytest.approx(0.05)
    assert ml.cdf(p.my, ys[-1]) == pytest.approx(0.95)


# ---------------------------------------------------------------------------
# Hazard gradient
# ---------------------------------------------------------------------------


def test_hazard_gradient_independent(joint_cdf_params):
    h1, h2 = dep.hazard_gradient(joint_cdf_params(0.0), 1.2, 0.4)
    assert h1 == pytest.approx(0.5 + 1.5 * 1.2)
    assert h2 == pytest.approx(0.7 + 2.0 * 0.4)


def test_hazard_gradient_on_axis(joint_cdf_params, lam):
    h1, _ = dep.hazard_gradient(joint_cdf_params(lam), 0.8, 0.0)
    assert h1 == pytest.approx(0.5 + 1.5 * 0.8, rel=1e-14)


def test_hazard_gradient_matches_stencil(reliability_params):
    p = reliability_params(1.0)
    h1, h2 = dep.hazard_gradient(p, 1.0, 1.0)
    log_s = lambda a, b: math.log(fj.joint_survival(p, a, b))  # noqa: E731
    assert h1 == pytest.approx(-finite_diff(lambda a: log_s(a, 1.0), 1.0), abs=1e-5)
    assert h2 == pytest.approx(-finite_diff(lambda b: log_s(1.0, b), 1.0), abs=1e-5)
    assert h1 > 0 and h2 > 0


def test_hazard_gradient_path_integral(joint_cdf_params, lam):
    p = joint_cdf_params(lam)
    x, y = 1.1, 0.9
    first, _ = quad(lambda u: dep.hazard_gradient(p, u, 0.0)[0], 0.0, x, epsabs=1e-12)
    second, _ = quad(lambda v: dep.hazard_gradient(p, x, v)[1], 0.0, y, epsabs=1e-12)
    assert first + second == pytest.approx(-math.log(fj.joint_survival(p, x, y)), abs=1e-9)


@pytest.mark.parametrize("lam_", [-1.0, -0.5, 0.0, 0.5, 1.0])
def test_conditional_hazard_monotonicity(joint_cdf_params, lam_):
    grid = np.linspace(0.0, 3.0, 16)
    result = dep.conditional_hazard_monotonicity(joint_cdf_params(lam_), grid, grid)
    assert result.holds
    expected = {1: "non_increasing", -1: "non_decreasing", 0: "constant"}[int(np.sign(lam_))]
    assert result.direction == expected


# ---------------------------------------------------------------------------
# Clayton-Oakes
# ---------------------------------------------------------------------------


def test_theta_independent(joint_cdf_params):
    x, y = np.meshgrid(np.linspace(0.2, 2.0, 5), np.linspace(0.2, 2.0, 5))
    np.testing.assert_allclose(dep.clayton_oakes_theta(joint_cdf_params(0.0), x, y), 1.0)


def test_theta_at_origin(joint_cdf_params, lam):
    theta = dep.clayton_oakes_theta(joint_cdf_params(lam), 0.0, 0.0)
    assert theta == pytest.approx(1.0 + lam, abs=1e-12)


def test_survival_partials_match_stencil(joint_cdf_params):
    p = joint_cdf_params(0.5)
    x = y = 0.5
    dx = finite_diff(lambda a: fj.joint_survival(p, a, y), x)
    dy = finite_diff(lambda b: fj.joint_survival(p, x, b), y)
    assert dep.survival_partial_x(p, x, y) == pytest.approx(dx, abs=1e-5)
    assert dep.survival_partial_y(p, x, y) == pytest.approx(dy, abs=1e-5)
    assert dep.clayton_oakes_theta(p, x, y) > 0
