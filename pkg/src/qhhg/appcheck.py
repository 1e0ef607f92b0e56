"""Driving-field observables under the Husimi-as-P approximation.

Each quantity is computed by quadrature of the approximate density and
compared with the value for the exact quantum state, which shows where the
approximation can be trusted.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import optimize

from .phasespace import (
    DrivingField,
    log_radial_moment,
    mean_photon_number,
    phase_space_grid,
    radial_grid,
)


def app_normal_moment(field, k, grid=None):
    """``integral Q(a) |a|^(2k) d^2a`` by log-domain radial quadrature.

    Under the approximation this is the normally ordered moment
    ``<a^dag^k a^k>``.
    """
    if int(k) != k or k < 1:
        raise ValueError("k must be a positive integer")
    if field.kind not in ("fock", "bsv", "thermal"):
        raise ValueError("moments are defined for fock, bsv and thermal fields")
    value = math.exp(log_radial_moment(field, 2 * int(k), grid))
    if not math.isfinite(value):
        raise ArithmeticError("moment is not finite")
    return value


def quadrature_moments(field, grid=None, angular_nodes=64):
    """``(<a>, <a^2>)`` under the approximate density, by 2-D quadrature."""
    grid = grid or phase_space_grid(field, radial_grid(field), angular_nodes)
    alpha = grid.amp * np.exp(1j * grid.phase)
    w = grid.weights
    norm = math.fsum(w)
    first = complex(math.fsum(w * alpha.real), math.fsum(w * alpha.imag)) / norm
    sq = alpha * alpha
    second = complex(math.fsum(w * sq.real), math.fsum(w * sq.imag)) / norm
    return first, second


MANDEL_MODES = ("app_paper", "app_integral", "exact")


def mandel_q(field, mode, grid=None):
    """Mandel Q of a Fock state.

    ``app_paper``
        ``3 + 2/n``, i.e. the approximate second moment with the mean taken
        as ``n``.
    ``app_integral``
        ``(M_2 - M_1^2) / M_1`` with both moments integrated.
    ``exact``
        ``-1``.
    """
    if field.kind != "fock" or field.n < 1:
        raise ValueError("Mandel Q is evaluated for Fock states with n >= 1")
    if mode == "app_paper":
        return 3.0 + 2.0 / field.n
    if mode == "app_integral":
        grid = grid or radial_grid(field)
        m1 = app_normal_moment(field, 1, grid)
        m2 = app_normal_moment(field, 2, grid)
        return (m2 - m1 * m1) / m1
    if mode == "exact":
        return -1.0
    raise ValueError(f"mode must be one of {MANDEL_MODES}")


def quadrature_variance(photons, second, theta):
    """Variance of ``X_theta = (a e^(-i theta) + h.c.)/2`` for zero mean amplitude.

    ``photons`` is ``<a^dag a>`` and ``second`` is ``<a^2>``.
    """
    return 0.25 * (2.0 * np.real(second * np.exp(-2j * theta)) + 2.0 * photons + 1.0)


def min_quadrature_variance(field, mode="app", method="closed", grid=None):
    """Smallest quadrature variance of squeezed vacuum.

    With ``mode="app"`` the moments come from the approximate density;
    ``method="numeric"`` minimises over ``theta`` using quadrature moments
    instead of the closed form ``cosh^2 r (1 - tanh r)/2 + 1/4``.
    ``mode="exact"`` returns ``exp(-2r)/4``.
    """
    if field.kind != "bsv":
        raise ValueError("defined for squeezed vacuum only")
    r = field.r
    if mode == "exact":
        return 0.25 * math.exp(-2.0 * abs(r))
    if mode != "app":
        raise ValueError("mode must be 'app' or 'exact'")
    if method == "closed":
        # cosh^2 r (1 - tanh r) = cosh^2 r * 2 / (exp(2|r|) + 1)
        return math.cosh(r) ** 2 / (math.exp(2.0 * abs(r)) + 1.0) + 0.25
    if method != "numeric":
        raise ValueError("method must be 'closed' or 'numeric'")
    return minimize_quadrature_variance(field, grid)[1]


def minimize_quadrature_variance(field, grid=None):
    """``(theta*, variance)`` minimising the approximate variance numerically."""
    grid = grid or phase_space_grid(field, radial_grid(field))
    _, second = quadrature_moments(field, grid)
    photons = app_normal_moment(field, 1, grid.radial)
    res = optimize.minimize_scalar(
        lambda th: quadrature_variance(photons, second, th),
        bounds=(-0.5 * math.pi, 0.5 * math.pi),
        method="bounded",
        options={"xatol": 1e-10},
    )
    return float(res.x), float(res.fun)


@dataclass(frozen=True)
class AppReport:
    photon_number_app: float
    photon_number_exact: float
    mandel_q_app: float
    mandel_q_exact: float
    min_quad_variance_app: float
    min_quad_variance_exact: float
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def app_report(fock_n=100, bsv_r=1.0):
    """Collect the approximate and exact values for one Fock and one BSV state."""
    fock = DrivingField.fock(fock_n)
    bsv = DrivingField.bsv(bsv_r)
    fgrid = radial_grid(fock)
    bgrid = phase_space_grid(bsv, radial_grid(bsv))
    first, second = quadrature_moments(bsv, bgrid)
    theta, var_numeric = minimize_quadrature_variance(bsv, bgrid)
    m1 = app_normal_moment(fock, 1, fgrid)
    m2 = app_normal_moment(fock, 2, fgrid)
    details = {
        "fock_n": fock_n,
        "bsv_r": bsv_r,
        "photon_number_app_source": "integral of Q|a|^2 (closed form n + 1)",
        "photon_number_app_large_n": float(fock_n),
        "fock_second_moment_app": m2,
        "fock_second_moment_closed": float(fock_n**2 + 3 * fock_n + 2),
        "mandel_q_app_source": "app_integral",
        "mandel_q_app_mean_n": mandel_q(fock, "app_paper"),
        "bsv_photon_number_app": app_normal_moment(bsv, 1, bgrid.radial),
        "bsv_photon_number_closed": math.cosh(bsv_r) ** 2,
        "bsv_photon_number_exact": mean_photon_number(bsv),
        "bsv_mean_amplitude_abs": abs(first),
        "bsv_a2_app_real": second.real,
        "bsv_a2_app_imag": second.imag,
        "bsv_a2_closed": -math.tanh(bsv_r) * math.cosh(bsv_r) ** 2,
        "min_quad_variance_app_numeric": var_numeric,
        "min_quad_variance_theta": theta,
    }
    return AppReport(
        photon_number_app=m1,
        photon_number_exact=mean_photon_number(fock),
        mandel_q_app=(m2 - m1 * m1) / m1,
        mandel_q_exact=mandel_q(fock, "exact"),
        min_quad_variance_app=min_quadrature_variance(bsv, "app"),
        min_quad_variance_exact=min_quadrature_variance(bsv, "exact"),
        details=details,
    )
