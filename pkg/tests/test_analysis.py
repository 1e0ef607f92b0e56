import math

import numpy as np
import pytest

from qhhg.analysis import (
    cutoff_order,
    harmonic_signal_exact,
    harmonic_signal_perturbative,
    inside_perturbative_range,
    perturbative_bound,
    perturbative_limit,
    scaling_curve,
)
from qhhg.band import BandModel, k_constant, lattice_coupling
from qhhg.phasespace import DrivingField

from conftest import ZNO_PHOTONS, ZNO_SQUEEZING

G0, W0 = 4e-8, 0.005


def test_cutoff_values(band):
    coh = cutoff_order(band, DrivingField.coherent(math.sqrt(ZNO_PHOTONS)), G0, W0)
    fock = cutoff_order(band, DrivingField.fock(int(ZNO_PHOTONS)), G0, W0)
    thermal = cutoff_order(band, DrivingField.thermal(ZNO_PHOTONS), G0, W0)
    bsv = cutoff_order(band, DrivingField.bsv(ZNO_SQUEEZING), G0, W0)
    assert coh == pytest.approx(25.8, abs=0.1)
    assert coh == pytest.approx(5 * 6.0189e-6 * 8.5732e5, rel=1e-4)
    assert abs(fock - coh) < 0.1
    assert thermal == pytest.approx(58.7, abs=0.5)
    assert bsv == pytest.approx(67.3, abs=0.5)
    assert coh <= fock < thermal < bsv


def test_cutoff_scale_invariant(band):
    scaled = BandModel(a=band.a, b=[3.7 * x for x in band.b], occupied_q=band.occupied_q,
                       spin_degeneracy=band.spin_degeneracy)
    f = DrivingField.thermal(1e9)
    assert cutoff_order(scaled, f, G0, W0) == cutoff_order(band, f, G0, W0)


def test_signal_vanishes_without_photons(band):
    f = DrivingField.coherent(0.0)
    assert harmonic_signal_exact(band, f, 5, G0, W0) == 0.0
    assert harmonic_signal_perturbative(band, f, 5, G0, W0) == 0.0


def test_even_or_nonpositive_order_rejected(band):
    with pytest.raises(ValueError):
        harmonic_signal_exact(band, DrivingField.coherent(1.0), 4, G0, W0)
    with pytest.raises(ValueError):
        harmonic_signal_perturbative(band, DrivingField.coherent(1.0), 0, G0, W0)


def test_coherent_perturbative_closed_form(band):
    n, N = 5, 1e7
    gt = lattice_coupling(band, G0, W0)
    ref = k_constant(band, n) * gt ** (2 * n) * N**n / (math.factorial(n) ** 2 * 4**n)
    val = harmonic_signal_perturbative(band, DrivingField.coherent(math.sqrt(N)), n, G0, W0)
    assert val == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("kind", ["coherent", "thermal", "fock", "bsv"])
def test_exact_agrees_with_perturbative_in_range(band, kind):
    limit = perturbative_limit(band, kind, 5, G0, W0)
    f = DrivingField.from_mean_photons(kind, 0.5 * limit.mean_photons)
    assert inside_perturbative_range(band, f, 5, G0, W0)
    e = harmonic_signal_exact(band, f, 5, G0, W0)
    p = harmonic_signal_perturbative(band, f, 5, G0, W0)
    assert abs(e - p) / e < 0.05


def test_exact_matches_perturbative_deep_in_range(band):
    f = DrivingField.coherent(math.sqrt(1e6))
    e = harmonic_signal_exact(band, f, 5, G0, W0)
    p = harmonic_signal_perturbative(band, f, 5, G0, W0)
    assert e == pytest.approx(p, rel=1e-2)


def test_thermal_to_coherent_ratio(band):
    N = 1e6
    t = harmonic_signal_exact(band, DrivingField.thermal(N), 5, G0, W0)
    c = harmonic_signal_exact(band, DrivingField.coherent(math.sqrt(N)), 5, G0, W0)
    assert t / c == pytest.approx(120.0, rel=0.02)


@pytest.mark.parametrize("kind", ["coherent", "thermal", "fock", "bsv"])
def test_perturbative_slope(band, kind):
    lo = harmonic_signal_perturbative(band, DrivingField.from_mean_photons(kind, 1e6), 5, G0, W0)
    hi = harmonic_signal_perturbative(band, DrivingField.from_mean_photons(kind, 1e7), 5, G0, W0)
    assert math.log10(hi / lo) == pytest.approx(5.0, abs=0.01)


def test_fock_perturbative_uses_integrated_moment(band):
    # <|a|^6> under the Fock Husimi function is (n+1)(n+2)(n+3)
    n_ph, n = 100, 3
    f = DrivingField.fock(n_ph)
    gt = lattice_coupling(band, G0, W0)
    ref = k_constant(band, n) * gt ** (2 * n) * (n_ph + 1) * (n_ph + 2) * (n_ph + 3) / (math.factorial(n) ** 2 * 4**n)
    assert harmonic_signal_perturbative(band, f, n, G0, W0) == pytest.approx(ref, rel=1e-8)


def test_perturbative_limits(band):
    gt = lattice_coupling(band, G0, W0)
    coh = perturbative_limit(band, "coherent", 5, G0, W0)
    assert coh.mean_photons == pytest.approx((5 / (45 * gt)) ** 2, rel=1e-12)
    assert coh.mean_photons == pytest.approx(3.41e8, rel=2e-3)
    th = perturbative_limit(band, "thermal", 5, G0, W0)
    spread = math.sqrt(math.pi) / 2 + 3 * math.sqrt(1 - math.pi / 4)
    assert spread == pytest.approx(2.276, abs=1e-3)
    assert coh.mean_photons / th.mean_photons == pytest.approx(spread**2, rel=1e-9)
    fock = perturbative_limit(band, "fock", 5, G0, W0)
    # Fock spread is sqrt(n) + 1.5 to leading order
    assert fock.mean_photons == pytest.approx((coh.spread_bound - 1.5) ** 2, abs=2.0)
    bsv = perturbative_limit(band, "bsv", 5, G0, W0)
    assert 0 < bsv.mean_photons < th.mean_photons
    with pytest.raises(ValueError):
        perturbative_limit(band, "laser", 5, G0, W0)


def test_boundary_counts_as_inside(band):
    bound = perturbative_bound(band, 5, G0, W0)
    assert inside_perturbative_range(band, DrivingField.coherent(bound), 5, G0, W0)
    assert not inside_perturbative_range(band, DrivingField.coherent(bound * (1 + 1e-9)), 5, G0, W0)


def test_scaling_curve(band):
    limit = perturbative_limit(band, "thermal", 5, G0, W0)
    photons = limit.mean_photons * np.array([0.01, 0.1, 10.0])
    curve = scaling_curve(band, "thermal", 5, G0, W0, photons, nodes=200)
    assert curve.validity_threshold == limit.mean_photons
    assert list(curve.inside_range) == [True, True, False]
    slope = math.log10(curve.exact_signal[1] / curve.exact_signal[0])
    assert slope == pytest.approx(5.0, abs=0.05)
    assert abs(curve.exact_signal[2] / curve.perturbative_signal[2] - 1) > 0.05
