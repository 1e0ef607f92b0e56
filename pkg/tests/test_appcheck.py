import math

import mpmath
import pytest

from qhhg.appcheck import (
    app_normal_moment,
    app_report,
    mandel_q,
    min_quadrature_variance,
    minimize_quadrature_variance,
    quadrature_moments,
)
from qhhg.phasespace import DrivingField


@pytest.mark.parametrize("n", [1, 2, 10, 100, 5000])
def test_fock_moments(n):
    f = DrivingField.fock(n)
    assert app_normal_moment(f, 1) == pytest.approx(n + 1, rel=1e-8)
    assert app_normal_moment(f, 2) == pytest.approx(n * n + 3 * n + 2, rel=1e-6)


@pytest.mark.parametrize("r", [0.0, 0.5, 1.0, 3.0])
def test_bsv_photon_moment(r):
    assert app_normal_moment(DrivingField.bsv(r), 1) == pytest.approx(math.cosh(r) ** 2, rel=1e-8)


def test_moment_errors():
    with pytest.raises(ValueError):
        app_normal_moment(DrivingField.fock(3), 0)
    with pytest.raises(ValueError):
        app_normal_moment(DrivingField.coherent(1.0), 1)


def test_mandel_q_modes():
    assert mandel_q(DrivingField.fock(2), "app_paper") == 4.0
    assert mandel_q(DrivingField.fock(17), "exact") == -1.0
    assert mandel_q(DrivingField.fock(100), "app_integral") == pytest.approx(1.0, abs=1e-4)
    with pytest.raises(ValueError):
        mandel_q(DrivingField.fock(2), "other")
    with pytest.raises(ValueError):
        mandel_q(DrivingField.thermal(2.0), "exact")


@pytest.mark.parametrize("r", [0.3, 1.0, 2.5])
def test_bsv_quadrature_moments(r):
    first, second = quadrature_moments(DrivingField.bsv(r))
    assert abs(first) < 1e-10 * math.cosh(r)
    assert second.real == pytest.approx(-math.tanh(r) * math.cosh(r) ** 2, rel=1e-8)


def test_min_variance_examples():
    assert min_quadrature_variance(DrivingField.bsv(0.0), "app") == pytest.approx(0.75)
    assert min_quadrature_variance(DrivingField.bsv(0.0), "exact") == pytest.approx(0.25)
    assert min_quadrature_variance(DrivingField.bsv(1.0), "exact") == pytest.approx(0.033834, abs=1e-6)
    with pytest.raises(ValueError):
        min_quadrature_variance(DrivingField.thermal(1.0))
    with pytest.raises(ValueError):
        min_quadrature_variance(DrivingField.bsv(1.0), "other")


@pytest.mark.parametrize("r", [0.0, 0.2, 1.0, 4.0, 14.3548])
def test_min_variance_never_below_quarter(r):
    f = DrivingField.bsv(r)
    v = min_quadrature_variance(f, "app")
    assert v >= 0.25
    with mpmath.workdps(50):
        ref = 0.5 * mpmath.cosh(r) ** 2 * (1 - mpmath.tanh(r)) + mpmath.mpf(1) / 4
    assert v == pytest.approx(float(ref), rel=1e-12)


@pytest.mark.parametrize("r", [0.5, 1.0, 3.0])
def test_numeric_minimum_matches_closed_form(r):
    f = DrivingField.bsv(r)
    theta, var = minimize_quadrature_variance(f)
    assert abs(theta) < 1e-6
    assert var == pytest.approx(min_quadrature_variance(f, "app"), rel=1e-6)


def test_report():
    rep = app_report(100, 1.0)
    assert rep.photon_number_app == pytest.approx(101.0, rel=1e-8)
    assert rep.photon_number_exact == 100.0
    assert rep.mandel_q_app == pytest.approx(1.0, abs=1e-4)
    assert rep.mandel_q_exact == -1.0
    assert rep.min_quad_variance_exact == pytest.approx(math.exp(-2) / 4)
    d = rep.to_dict()
    assert d["details"]["bsv_a2_app_real"] == pytest.approx(d["details"]["bsv_a2_closed"], rel=1e-8)
    assert d["details"]["min_quad_variance_app_numeric"] == pytest.approx(rep.min_quad_variance_app, rel=1e-6)
