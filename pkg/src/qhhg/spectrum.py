"""Harmonic spectra from pulsed currents and in the Floquet limit.

Spectral densities carry the ``omega**2`` factor of the radiated power and
are reported in arbitrary units.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .band import c_coefficients, lattice_coupling
from .drive import current_batch
from .phasespace import radial_grid
from .specfun import bessel_j_table


@dataclass(frozen=True)
class Spectrum:
    omega: np.ndarray
    density: np.ndarray
    metadata: dict = field(default_factory=dict)

    def harmonic_order(self, omega0):
        return self.omega / omega0


@dataclass(frozen=True)
class FloquetPeaks:
    orders: np.ndarray
    weights: np.ndarray

    def weight(self, n):
        """Weight of odd order ``n``; ``None`` for orders that carry no peak."""
        hit = np.nonzero(self.orders == n)[0]
        return float(self.weights[hit[0]]) if hit.size else None

    def as_dict(self):
        return {int(n): float(w) for n, w in zip(self.orders, self.weights)}


def neumaier_sum(values, axis=0):
    """Compensated sum along ``axis``; order-fixed, so results are reproducible."""
    values = np.moveaxis(np.asarray(values, dtype=float), axis, 0)
    total = np.zeros(values.shape[1:])
    comp = np.zeros_like(total)
    for v in values:
        t = total + v
        big = np.abs(total) >= np.abs(v)
        comp += np.where(big, (total - t) + v, (v - t) + total)
        total = t
    return total + comp


def _check_uniform(times):
    times = np.asarray(times, dtype=float)
    if times.size < 3:
        raise ValueError("need at least three samples")
    steps = np.diff(times)
    dt = (times[-1] - times[0]) / (times.size - 1)
    if np.max(np.abs(steps - dt)) > 1e-9 * abs(dt):
        raise ValueError("time grid is not uniform")
    return dt


def _trapezoid_dft(samples, dt):
    """Trapezoid-rule Fourier transform on ``omega_k = 2 pi k / (N dt)``.

    At these frequencies the last sample coincides in phase with the first,
    so the two half-weight end points fold into one full sample.
    """
    samples = np.atleast_2d(samples)
    folded = samples[:, :-1].copy()
    folded[:, 0] = 0.5 * (samples[:, 0] + samples[:, -1])
    return np.fft.rfft(folded, axis=1) * dt


def _frequencies(n_samples, dt):
    n = n_samples - 1
    return 2.0 * math.pi * np.fft.rfftfreq(n, d=dt)


def sc_spectrum_samples(times, j):
    """``omega**2 |FT j|**2`` for one or many traces sampled on ``times``."""
    dt = _check_uniform(times)
    j = np.asarray(j, dtype=float)
    if not np.all(np.isfinite(j)):
        raise ValueError("current samples must be finite")
    omega = _frequencies(len(times), dt)
    F = _trapezoid_dft(j, dt)
    dens = omega**2 * (F.real**2 + F.imag**2)
    return omega, dens if j.ndim > 1 else dens[0]


def sc_spectrum(trace):
    """Semiclassical spectrum of a single current trace."""
    omega, dens = sc_spectrum_samples(trace.grid.times, trace.j)
    return Spectrum(omega=omega, density=dens, metadata={"kind": "semiclassical"})


def quantum_spectrum(band, pulse, field, grid, radial=None, threads=1, chunk=16):
    """Radially averaged spectrum ``sum_i w_i S_sc(|a|_i)`` at phase zero.

    Parameters
    ----------
    radial : RadialGrid, optional
        Defaults to ``radial_grid(field)``.
    threads : int
        Worker threads over node chunks. The reduction order is fixed, so
        the result does not depend on this value.
    """
    radial = radial or radial_grid(field)
    nodes = radial.nodes
    weights = radial.weights

    def work(lo):
        hi = min(lo + chunk, len(nodes))
        j, _ = current_batch(band, pulse, nodes[lo:hi], 0.0, grid)
        _, dens = sc_spectrum_samples(grid.times, j)
        return np.atleast_2d(dens) * weights[lo:hi, None]

    starts = list(range(0, len(nodes), chunk))
    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, starts))
    else:
        parts = [work(s) for s in starts]
    stacked = np.concatenate(parts, axis=0)
    omega = _frequencies(len(grid.times), grid.dt)
    dens = neumaier_sum(stacked, axis=0)
    meta = {
        "kind": field.kind,
        "radial_nodes": len(nodes),
        "weight_sum": radial.weight_sum,
        "tail_mass": radial.tail_mass,
        "samples_per_cycle": grid.samples_per_cycle,
        "convention": "omega^2 |FT j|^2, arbitrary units",
    }
    return Spectrum(omega=omega, density=dens, metadata=meta)


def bessel_sums(band, g_tilde, amps, n_max):
    """``sum_l C_l J_n(l g_tilde |a|)`` for ``n = 0..n_max``, shape ``(n_max+1, nodes)``."""
    c = c_coefficients(band)
    amps = np.atleast_1d(np.asarray(amps, dtype=float))
    out = np.zeros((n_max + 1, amps.size))
    for l, cl in enumerate(c, start=1):
        if cl == 0.0:
            continue
        out += cl * bessel_j_table(n_max, l * g_tilde * amps)
    return out


def floquet_peaks(band, field, g0, omega0, n_max, radial=None):
    """Odd-harmonic peak weights ``(n w0)^2 <[sum_l C_l J_n(l g~ |a|)]^2>``."""
    if int(n_max) != n_max or n_max < 1 or n_max % 2 == 0:
        raise ValueError("n_max must be an odd positive integer")
    radial = radial or radial_grid(field)
    g_tilde = lattice_coupling(band, g0, omega0)
    sums = bessel_sums(band, g_tilde, radial.nodes, int(n_max))
    orders = np.arange(1, int(n_max) + 1, 2)
    sq = sums[orders] ** 2
    avg = neumaier_sum((sq * radial.weights[None, :]).T, axis=0)
    return FloquetPeaks(orders=orders, weights=(orders * omega0) ** 2 * avg)


def harmonic_peak_heights(spec, omega0, n_max):
    """Trapezoid integral of the density over ``[(n-1/2) w0, (n+1/2) w0]``.

    Returns a list of ``(n, height)`` for ``n = 1..n_max``.
    """
    omega = spec.omega
    d_omega = omega[1] - omega[0]
    if d_omega > omega0 / 8.0:
        raise ValueError("spectral resolution is coarser than omega0/8")
    out = []
    for n in range(1, int(n_max) + 1):
        lo, hi = (n - 0.5) * omega0, (n + 0.5) * omega0
        if hi > omega[-1]:
            raise ValueError(f"harmonic {n} window exceeds the Nyquist frequency")
        inside = (omega >= lo - 1e-9 * d_omega) & (omega <= hi + 1e-9 * d_omega)
        out.append((n, float(integrate.trapezoid(spec.density[inside], omega[inside]))))
    return out
