"""Cutoff estimate, harmonic yields and the range of the power-scaling law."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .band import lattice_coupling, log_k_constant
from .phasespace import (
    DrivingField,
    analytic_moments,
    log_radial_moment,
    moments,
    radial_grid,
)
from .spectrum import bessel_sums, neumaier_sum

# Bessel argument must stay below n / SAFETY for the lowest-order law.
SAFETY = 9.0
CUTOFF_SIGMAS = 3.0


def cutoff_order(band, field, g0, omega0, radial=None):
    """Harmonic order ``l_max g~ (mu_P + 3 sigma_P)`` (real, not rounded)."""
    mu, sigma = moments(field, radial)
    return band.l_max * lattice_coupling(band, g0, omega0) * (mu + CUTOFF_SIGMAS * sigma)


def _check_odd(n):
    if int(n) != n or n < 1 or n % 2 == 0:
        raise ValueError(f"harmonic order must be odd and positive, got {n}")


def harmonic_signal_exact(band, field, n, g0, omega0, radial=None):
    """``< [sum_l C_l J_n(l g~ |a|)]^2 >`` over the field's radial distribution."""
    _check_odd(n)
    radial = radial or radial_grid(field)
    g_tilde = lattice_coupling(band, g0, omega0)
    sums = bessel_sums(band, g_tilde, radial.nodes, int(n))[int(n)]
    return float(neumaier_sum(radial.weights * sums**2))


def log_harmonic_signal_perturbative(band, field, n, g0, omega0, radial=None):
    _check_odd(n)
    g_tilde = lattice_coupling(band, g0, omega0)
    if g_tilde == 0.0:
        return -math.inf
    log_m = log_radial_moment(field, 2 * n, radial)
    if not field.is_point_mass:
        log_m -= log_radial_moment(field, 0, radial)
    return (
        log_k_constant(band, n)
        + 2 * n * math.log(g_tilde)
        - 2.0 * math.lgamma(n + 1)
        - 2 * n * math.log(2.0)
        + log_m
    )


def harmonic_signal_perturbative(band, field, n, g0, omega0, radial=None):
    """Lowest-order law ``K_n g~^(2n) / ((n!)^2 4^n) <|a|^(2n)>``.

    ``<|a|^(2n)> = g^(n)(0) <|a|^2>^n`` is taken from the same radial
    distribution as the exact signal, so the two agree as ``|a| -> 0``.
    """
    if field.is_point_mass and field.alpha_abs == 0.0:
        return 0.0
    value = log_harmonic_signal_perturbative(band, field, n, g0, omega0, radial)
    return math.exp(value) if value > -745.0 else 0.0


def perturbative_bound(band, n, g0, omega0):
    """Largest admissible ``mu_P + 3 sigma_P``: ``n / (9 l_max g~)``."""
    return n / (SAFETY * band.l_max * lattice_coupling(band, g0, omega0))


def _spread(field):
    mu, sigma = analytic_moments(field)
    return mu + CUTOFF_SIGMAS * sigma


def inside_perturbative_range(band, field, n, g0, omega0):
    """True when ``mu_P + 3 sigma_P <= n / (9 l_max g~)`` (boundary included)."""
    return _spread(field) <= perturbative_bound(band, n, g0, omega0) * (1.0 + 1e-12)


@dataclass(frozen=True)
class PerturbativeLimit:
    mean_photons: float
    spread_bound: float
    safety: float = SAFETY


def perturbative_limit(band, kind, n, g0, omega0):
    """Largest nominal photon number for which the power law is trusted.

    Bisects over the field's own parameter (photon number, Fock index or
    squeezing) with ``mu_P + 3 sigma_P`` as the monotone criterion.
    """
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    bound = perturbative_bound(band, n, g0, omega0)
    if kind == "coherent":
        return PerturbativeLimit(bound * bound, bound)

    def spread_at(p):
        if kind == "thermal":
            return _spread(DrivingField.thermal(p))
        if kind == "fock":
            return _spread(DrivingField.fock(int(p)))
        if kind == "bsv":
            return _spread(DrivingField.bsv(p))
        raise ValueError(f"unknown field kind {kind!r}")

    if kind == "fock":
        lo, hi = 0, 1
        if spread_at(lo) > bound:
            raise ValueError("even the vacuum violates the perturbative bound")
        while spread_at(hi) <= bound:
            lo, hi = hi, hi * 2
            if hi > 1 << 62:
                raise ValueError("bisection failed to bracket the threshold")
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if spread_at(mid) <= bound:
                lo = mid
            else:
                hi = mid
        return PerturbativeLimit(float(lo), bound)

    if kind == "thermal":
        lo, hi = 0.0, 1.0
        while spread_at(hi) <= bound:
            lo, hi = hi, hi * 4.0
            if hi > 1e300:
                raise ValueError("bisection failed to bracket the threshold")
        to_photons = lambda p: p
    else:
        lo, hi = 0.0, 1.0
        if spread_at(lo) > bound:
            raise ValueError("squeezed vacuum at r = 0 violates the perturbative bound")
        while spread_at(hi) <= bound:
            lo, hi = hi, hi + 1.0
            if hi > 300:
                raise ValueError("bisection failed to bracket the threshold")
        to_photons = lambda p: math.sinh(p) ** 2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if spread_at(mid) <= bound:
            lo = mid
        else:
            hi = mid
    return PerturbativeLimit(to_photons(lo), bound)


@dataclass(frozen=True)
class ScalingCurve:
    mean_photons: np.ndarray
    exact_signal: np.ndarray
    perturbative_signal: np.ndarray
    inside_range: np.ndarray
    validity_threshold: float


def scaling_curve(band, kind, n, g0, omega0, mean_photons, rel_tail=1e-12, nodes=400):
    """Exact and lowest-order harmonic yields over a photon-number sweep."""
    mean_photons = np.asarray(mean_photons, dtype=float)
    exact, pert, inside = [], [], []
    for N in mean_photons:
        field = DrivingField.from_mean_photons(kind, N)
        radial = radial_grid(field, rel_tail=rel_tail, nodes=nodes)
        exact.append(harmonic_signal_exact(band, field, n, g0, omega0, radial))
        pert.append(harmonic_signal_perturbative(band, field, n, g0, omega0, radial))
        inside.append(inside_perturbative_range(band, field, n, g0, omega0))
    limit = perturbative_limit(band, kind, n, g0, omega0)
    return ScalingCurve(
        mean_photons=mean_photons,
        exact_signal=np.array(exact),
        perturbative_signal=np.array(pert),
        inside_range=np.array(inside, dtype=bool),
        validity_threshold=limit.mean_photons,
    )

