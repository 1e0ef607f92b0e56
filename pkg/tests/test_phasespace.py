import math

import mpmath
import numpy as np
import pytest
from scipy import integrate

from qhhg.phasespace import (
    DrivingField,
    analytic_moments,
    bsv_radial_density_trapezoid,
    correlation_g,
    density,
    log_radial_density,
    mean_photon_number,
    moments,
    phase_space_grid,
    radial_density,
    radial_grid,
    second_moment,
)

from conftest import ZNO_PHOTONS, ZNO_SQUEEZING


def test_constructors_and_photon_numbers():
    assert mean_photon_number(DrivingField.coherent(3.0)) == 9.0
    assert mean_photon_number(DrivingField.thermal(4.0)) == 4.0
    assert mean_photon_number(DrivingField.fock(7)) == 7.0
    assert mean_photon_number(DrivingField.bsv(1.0)) == pytest.approx(math.sinh(1.0) ** 2)
    f = DrivingField.from_mean_photons("bsv", ZNO_PHOTONS)
    assert f.r == pytest.approx(14.3548, abs=1e-4)
    assert mean_photon_number(f) == pytest.approx(ZNO_PHOTONS, rel=1e-12)


@pytest.mark.parametrize(
    "args",
    [("laser",), ("thermal", 0, 0, 0.0), ("thermal", 0, 0, -1.0), ("coherent", -1.0), ("fock", 0, 0, 0, -2)],
)
def test_invalid_fields(args):
    with pytest.raises(ValueError):
        DrivingField(*args)


def test_density_examples():
    assert density(DrivingField.thermal(1.0), 0.0) == pytest.approx(1 / math.pi)
    assert density(DrivingField.fock(2), math.sqrt(2.0)) == pytest.approx(0.086157, abs=1e-6)
    a = 0.7 - 0.4j
    assert density(DrivingField.bsv(0.0), a) == pytest.approx(math.exp(-abs(a) ** 2) / math.pi, rel=1e-14)


def test_density_fock_arbitrary_precision():
    for n, amp in [(3, 1.2), (50, 7.0), (500, 22.5)]:
        ref = mpmath.exp(-amp**2) * mpmath.mpf(amp) ** (2 * n) / (mpmath.pi * mpmath.factorial(n))
        assert density(DrivingField.fock(n), amp) == pytest.approx(float(ref), rel=1e-11)


def test_large_fock_density_finite():
    f = DrivingField.fock(int(ZNO_PHOTONS))
    mu, _ = analytic_moments(f)
    val = radial_density(f, mu)
    assert np.isfinite(val) and val == pytest.approx(math.sqrt(2 / math.pi) / 0.5 * 0.5, rel=1e-3)


def test_density_rejects_coherent():
    with pytest.raises(ValueError):
        density(DrivingField.coherent(1.0), 0.5)
    with pytest.raises(ValueError):
        radial_density(DrivingField.coherent(1.0), 0.5)


def test_bsv_density_parity():
    f = DrivingField.bsv(0.8)
    for a in (0.3 + 0.9j, -1.2 + 0.1j, 2.0):
        assert density(f, a) == density(f, -a)


def test_thermal_radial_examples():
    f = DrivingField.thermal(4.0)
    assert radial_density(f, 0.0) == 0.0
    assert radial_density(f, 2.0) == pytest.approx(math.exp(-1.0), rel=1e-14)


@pytest.mark.parametrize("field", [DrivingField.thermal(4.0), DrivingField.fock(5), DrivingField.bsv(0.7)])
def test_radial_density_is_angular_integral(field):
    for amp in (0.4, 1.3, 2.9):
        ref = amp * integrate.quad(lambda p: float(density(field, amp * np.exp(1j * p))), 0, 2 * math.pi, epsabs=0, epsrel=1e-12)[0]
        assert radial_density(field, amp) == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("r", [0.0, 0.5, 2.0, 6.0, ZNO_SQUEEZING])
def test_bsv_radial_normalised(r):
    f = DrivingField.bsv(r)
    _, sigma = analytic_moments(f)
    pts = [p for p in (1.0, 10.0, 100.0, 1e3, 1e4, 1e5, 1e6) if p < 14 * sigma]
    total = integrate.quad(lambda a: float(radial_density(f, a)), 0, 14 * sigma + 10, points=pts, limit=500, epsabs=0, epsrel=1e-11)[0]
    assert total == pytest.approx(1.0, abs=1e-8)


def test_bsv_closed_form_matches_trapezoid():
    f = DrivingField.bsv(1.0)
    amp = np.array([0.2, 1.0, 2.5, 4.0])
    assert np.allclose(bsv_radial_density_trapezoid(f, amp), radial_density(f, amp), rtol=1e-12)


def test_bsv_trapezoid_misses_narrow_ridge():
    # at large squeezing 256 phases cannot resolve the ridge; the closed form is used instead
    f = DrivingField.bsv(ZNO_SQUEEZING)
    amp = np.array([5e5])
    assert abs(bsv_radial_density_trapezoid(f, amp)[0] / radial_density(f, amp)[0] - 1) > 1e-3


def test_log_radial_density_zero():
    assert log_radial_density(DrivingField.thermal(1.0), 0.0) == -math.inf


def test_coherent_grid():
    g = radial_grid(DrivingField.coherent(3.0))
    assert g.is_point_mass and len(g) == 1 and g.weights[0] == 1.0 and g.nodes[0] == 3.0
    assert moments(DrivingField.coherent(3.0)) == (3.0, 0.0)


def test_thermal_grid_normalisation():
    g = radial_grid(DrivingField.thermal(4.0), rel_tail=1e-10, nodes=200)
    assert g.weight_sum == pytest.approx(1.0, abs=1e-8)
    assert np.all(np.diff(g.nodes) > 0) and np.all(g.weights >= 0)


def test_fock_100_grid_tail_and_bounds():
    f = DrivingField.fock(100)
    g = radial_grid(f, rel_tail=1e-10)
    mu, sigma = analytic_moments(f)
    assert mu == pytest.approx(10.0, abs=0.05) and sigma == pytest.approx(0.5, abs=0.01)
    assert g.tail_mass < 1e-10
    assert g.nodes.min() >= mu - 12 * sigma and g.nodes.max() <= mu + 12 * sigma
    assert g.weight_sum == pytest.approx(1.0, abs=1e-8)


def test_grid_span_grows_for_heavy_tails():
    g = radial_grid(DrivingField.bsv(3.0), rel_tail=1e-12)
    assert g.span > 8.0 and g.tail_mass < 1e-12


def test_grid_errors():
    with pytest.raises(ValueError):
        radial_grid(DrivingField.thermal(1.0), nodes=8)
    with pytest.raises(ValueError):
        radial_grid(DrivingField.thermal(1.0), rel_tail=0.0)
    with pytest.raises(ValueError):
        radial_grid(DrivingField.thermal(1.0), rel_tail=1e-300)


def test_thermal_moments():
    mu, sigma = moments(DrivingField.thermal(4.0))
    assert mu == pytest.approx(1.772454, abs=1e-6)
    assert sigma == pytest.approx(0.926445, abs=1e-4)
    assert mu == pytest.approx(math.sqrt(math.pi * 4) / 2, rel=1e-10)
    assert sigma == pytest.approx(math.sqrt(4 * (1 - math.pi / 4)), rel=1e-8)


def test_bsv_moments_zno():
    f = DrivingField.bsv(ZNO_SQUEEZING)
    mu, sigma = moments(f)
    # half-normal limit at large squeezing
    sy = math.sqrt((1 + math.exp(2 * ZNO_SQUEEZING)) / 4)
    assert mu == pytest.approx(sy * math.sqrt(2 / math.pi), rel=1e-6)
    assert sigma == pytest.approx(sy * math.sqrt(1 - 2 / math.pi), rel=1e-6)
    assert mu == pytest.approx(6.8406e5, rel=2e-4)
    assert sigma == pytest.approx(5.1679e5, rel=2e-4)


@pytest.mark.parametrize("field", [DrivingField.thermal(3.0), DrivingField.fock(4), DrivingField.bsv(0.9)])
def test_moments_match_2d_quadrature(field):
    def integrand(power):
        return lambda y, x: float(density(field, x + 1j * y)) * math.hypot(x, y) ** power

    lim = 14.0
    m0 = integrate.dblquad(integrand(0), -lim, lim, -lim, lim, epsabs=1e-13, epsrel=1e-11)[0]
    m1 = integrate.dblquad(integrand(1), -lim, lim, -lim, lim, epsabs=1e-13, epsrel=1e-11)[0]
    m2 = integrate.dblquad(integrand(2), -lim, lim, -lim, lim, epsabs=1e-13, epsrel=1e-11)[0]
    mu, sigma = moments(field)
    assert m0 == pytest.approx(1.0, abs=1e-8)
    assert mu == pytest.approx(m1, rel=1e-8)
    assert sigma**2 == pytest.approx(m2 - m1**2, rel=1e-7)
    assert second_moment(field) == pytest.approx(m2, rel=1e-8)


def test_second_moment_vs_photon_number():
    assert second_moment(DrivingField.fock(10)) == 11.0
    assert second_moment(DrivingField.bsv(1.0)) == pytest.approx(math.cosh(1.0) ** 2)
    assert second_moment(DrivingField.thermal(2.5)) == mean_photon_number(DrivingField.thermal(2.5))


def test_zno_fock_moments():
    mu, sigma = moments(DrivingField.fock(int(ZNO_PHOTONS)))
    assert mu == pytest.approx(math.sqrt(ZNO_PHOTONS), rel=1e-9)
    assert sigma == pytest.approx(0.5, rel=1e-6)


def test_correlation_examples():
    assert correlation_g(DrivingField.coherent(5.0), 3) == 1.0
    assert correlation_g(DrivingField.thermal(2.0), 5) == pytest.approx(120.0, rel=1e-3)
    assert correlation_g(DrivingField.thermal(2.0), 2) == pytest.approx(2.0, rel=1e-3)


@pytest.mark.parametrize("n", range(1, 9))
def test_thermal_correlation_is_factorial(n):
    assert correlation_g(DrivingField.thermal(7.0), n) == pytest.approx(math.factorial(n), rel=1e-4)


def test_fock_correlation_closed_form():
    n = 100
    assert correlation_g(DrivingField.fock(n), 2) == pytest.approx((n * n + 3 * n + 2) / (n + 1) ** 2, rel=1e-10)


def test_correlation_errors():
    with pytest.raises(ValueError):
        correlation_g(DrivingField.thermal(1.0), 0)


def test_correlation_huge_photon_number():
    g5 = correlation_g(DrivingField.thermal(ZNO_PHOTONS), 5)
    assert g5 == pytest.approx(120.0, rel=1e-6)


@pytest.mark.parametrize("field", [DrivingField.thermal(5.0), DrivingField.fock(30), DrivingField.bsv(1.5)])
def test_phase_space_grid_weights(field):
    g = phase_space_grid(field, angular_nodes=64)
    assert math.fsum(g.weights) == pytest.approx(1.0, abs=1e-9)
    alpha = g.amp * np.exp(1j * g.phase)
    assert abs(np.sum(g.weights * alpha)) < 1e-10


@pytest.mark.parametrize("r", [0.3, 1.0, 3.0, ZNO_SQUEEZING])
def test_bsv_phase_grid_quadrature_moment(r):
    f = DrivingField.bsv(r)
    g = phase_space_grid(f)
    alpha = g.amp * np.exp(1j * g.phase)
    a2 = np.sum(g.weights * alpha**2)
    expected = -math.tanh(r) * math.cosh(r) ** 2
    assert a2.real == pytest.approx(expected, rel=1e-8)
    assert abs(a2.imag) < 1e-8 * abs(expected)


def test_phase_grid_errors():
    with pytest.raises(ValueError):
        phase_space_grid(DrivingField.thermal(1.0), angular_nodes=3)


def test_coherent_phase_grid():
    g = phase_space_grid(DrivingField.coherent(2.0, 0.3))
    assert len(g) == 1 and g.phase[0] == 0.3 and g.amp[0] == 2.0
