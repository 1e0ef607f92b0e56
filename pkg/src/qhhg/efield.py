"""Time-resolved mean and spread of the generated and driving fields.

The generated field of one classical drive realisation is proportional to
the second derivative of the current, ``E = -(4 / 3c^3) d^2 j/dt^2``. Mean
and variance follow by averaging over amplitude and phase of the drive.
Zero-point fluctuations and drive/generated cross terms are not included.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import signal

from .drive import current_batch
from .phasespace import mean_photon_number, phase_space_grid, radial_grid

SPEED_OF_LIGHT = 137.035999084
AU_TIME_FS = 0.024189

FIELD_PREFACTOR = -4.0 / (3.0 * SPEED_OF_LIGHT**3)


@dataclass(frozen=True)
class FieldTrace:
    times: np.ndarray
    mean: np.ndarray
    std: np.ndarray
    flat_top: tuple = (None, None)
    metadata: dict = field(default_factory=dict)

    @property
    def times_fs(self):
        return self.times * AU_TIME_FS

    def flat_top_mask(self):
        lo, hi = self.flat_top
        lo = self.times[0] if lo is None else lo
        hi = self.times[-1] if hi is None else hi
        return (self.times >= lo) & (self.times <= hi)


class _Accumulator:
    """Neumaier-compensated running sum of arrays."""

    def __init__(self, shape):
        self.total = np.zeros(shape)
        self.comp = np.zeros(shape)

    def add(self, v):
        t = self.total + v
        big = np.abs(self.total) >= np.abs(v)
        self.comp += np.where(big, (self.total - t) + v, (v - t) + self.total)
        self.total = t

    def value(self):
        return self.total + self.comp


def _variance(first, second, scale):
    var = second - first * first
    floor = 1e-10 * max(float(np.max(second)), 0.0)
    if np.any(var < -floor - 1e-300):
        raise ArithmeticError("negative variance beyond rounding: quadrature failure")
    return np.maximum(var, 0.0) * scale


def generated_field_stats(band, pulse, field, grid, quad=None, angular_nodes=64, threads=1, chunk=64):
    """Mean and standard deviation of the generated field on ``grid``.

    Parameters
    ----------
    quad : PhaseSpaceGrid, optional
        Amplitude/phase nodes; built from ``field`` if omitted.
    threads : int
        Worker threads over node chunks; partial sums are combined in a
        fixed order so the result does not depend on it.
    """
    quad = quad or phase_space_grid(field, radial_grid(field), angular_nodes)
    starts = list(range(0, len(quad), chunk))

    def work(lo):
        sl = slice(lo, lo + chunk)
        _, d2j = current_batch(band, pulse, quad.amp[sl], quad.phase[sl], grid, with_accel=True)
        w = quad.weights[sl, None]
        return (w * d2j).sum(axis=0), (w * d2j * d2j).sum(axis=0)

    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, starts))
    else:
        parts = [work(s) for s in starts]
    s1 = _Accumulator(grid.times.shape)
    s2 = _Accumulator(grid.times.shape)
    for a, b in parts:
        s1.add(a)
        s2.add(b)
    norm = math.fsum(quad.weights)
    first = s1.value() / norm
    second = s2.value() / norm
    mean = FIELD_PREFACTOR * first
    std = np.sqrt(_variance(first, second, FIELD_PREFACTOR**2))
    meta = {
        "kind": field.kind,
        "nodes": len(quad),
        "radial_nodes": len(quad.radial),
        "weight_sum": norm,
        "tail_mass": quad.radial.tail_mass,
        "neglected": "zero-point fluctuations, drive/generated cross terms",
    }
    return FieldTrace(grid.times.copy(), mean, std, pulse.flat_top(), meta)


def driving_field_stats(field, omega0, g0, times, quad=None, angular_nodes=64):
    """Mean and spread of the single-mode drive ``2 g0 sqrt(w0) |a| sin(w0 t - phi)``."""
    times = np.asarray(times, dtype=float)
    quad = quad or phase_space_grid(field, radial_grid(field), angular_nodes)
    scale = 2.0 * g0 * math.sqrt(omega0)
    s1 = _Accumulator(times.shape)
    s2 = _Accumulator(times.shape)
    step = 256
    for lo in range(0, len(quad), step):
        sl = slice(lo, lo + step)
        e = scale * quad.amp[sl, None] * np.sin(omega0 * times[None, :] - quad.phase[sl, None])
        w = quad.weights[sl, None]
        s1.add((w * e).sum(axis=0))
        s2.add((w * e * e).sum(axis=0))
    norm = math.fsum(quad.weights)
    mean = s1.value() / norm
    std = np.sqrt(_variance(mean, s2.value() / norm, 1.0))
    meta = {"kind": field.kind, "nodes": len(quad), "photons": mean_photon_number(field)}
    return FieldTrace(times.copy(), mean, std, (None, None), meta)


def driving_field_variance(second_moment, quadrature_moment, omega0, g0, times):
    """Closed-form drive variance ``2 g0^2 w0 [<|a|^2> - Re(<a^2> e^(-2i w0 t))]``.

    Valid for distributions with zero mean amplitude.
    """
    times = np.asarray(times, dtype=float)
    rot = np.real(complex(quadrature_moment) * np.exp(-2j * omega0 * times))
    return 2.0 * g0 * g0 * omega0 * (second_moment - rot)


def peak_width_report(trace, min_height=0.5):
    """``(peak time in fs, FWHM in fs)`` for the main peaks over the flat top.

    Uses ``|mean|`` when the spread vanishes, otherwise the spread. Only
    peaks whose height and prominence both reach ``min_height`` times the
    maximum are reported, so a flat plateau has none. Widths are taken at
    half of each peak's prominence.
    """
    use_mean = not np.any(trace.std > 0.0)
    sig = np.abs(trace.mean) if use_mean else trace.std
    mask = trace.flat_top_mask()
    sig = sig[mask]
    t = trace.times[mask]
    top = float(np.max(sig)) if sig.size else 0.0
    if top <= 0.0 or not math.isfinite(top):
        raise ValueError("trace has no signal")
    peaks, _ = signal.find_peaks(sig, height=min_height * top, prominence=min_height * top)
    if peaks.size == 0:
        raise ValueError("no interior peak above the height threshold")
    widths, _, _, _ = signal.peak_widths(sig, peaks, rel_height=0.5)
    dt = t[1] - t[0]
    return [(float(t[p] * AU_TIME_FS), float(w * dt * AU_TIME_FS)) for p, w in zip(peaks, widths)]


def dominant_frequency(times, values):
    """Angular frequency of the strongest nonzero DFT component of ``values``."""
    values = np.asarray(values, dtype=float) - np.mean(values)
    dt = times[1] - times[0]
    spec = np.abs(np.fft.rfft(values))
    freqs = 2.0 * math.pi * np.fft.rfftfreq(values.size, d=dt)
    k = int(np.argmax(spec[1:])) + 1
    # parabolic refinement on the log magnitude
    if 1 <= k < spec.size - 1 and np.all(spec[k - 1 : k + 2] > 0):
        a, b, c = np.log(spec[k - 1 : k + 2])
        denom = a - 2 * b + c
        shift = 0.5 * (a - c) / denom if denom != 0 else 0.0
        return float(freqs[k] + shift * (freqs[1] - freqs[0]))
    return float(freqs[k])


def polarization_sum_integral(direction=(0.0, 0.0, 1.0), n_theta=64, n_phi=64):
    """``integral dOmega sum_s e_s (j . e_s)`` for a unit current direction.

    Gauss-Legendre in ``cos(theta)`` and uniform ``phi``; ``e_1 = theta_hat``
    and ``e_2 = phi_hat`` span the plane transverse to the emission
    direction. Returns a 3-vector.
    """
    j = np.asarray(direction, dtype=float)
    j = j / np.linalg.norm(j)
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    ct = x[:, None]
    st = np.sqrt(1.0 - ct * ct)
    cp, sp = np.cos(phi)[None, :], np.sin(phi)[None, :]
    e_theta = np.stack([ct * cp, ct * sp, -st * np.ones_like(cp)], axis=-1)
    e_phi = np.stack([-sp * np.ones_like(ct), cp * np.ones_like(ct), np.zeros_like(ct * cp)], axis=-1)
    total = np.zeros(3)
    for e in (e_theta, e_phi):
        proj = e @ j
        total += np.einsum("tp,tpk->k", wx[:, None] * proj, e) * (2.0 * math.pi / n_phi)
    return total


def mode_sum_mean_field(times, j, n_modes=None):
    """Generated field from an explicit sum over a truncated set of modes.

    Each Fourier mode of ``j`` on the record is differentiated twice
    (factor ``-omega^2``) and resummed, then scaled by ``-4/(3c^3)``.
    ``n_modes`` limits the sum to the lowest modes.
    """
    times = np.asarray(times, dtype=float)
    j = np.asarray(j, dtype=float)
    samples = j[:-1]
    dt = times[1] - times[0]
    coeffs = np.fft.rfft(samples)
    omega = 2.0 * math.pi * np.fft.rfftfreq(samples.size, d=dt)
    if n_modes is not None:
        coeffs[n_modes + 1 :] = 0.0
    d2 = np.fft.irfft(-(omega**2) * coeffs, n=samples.size)
    return FIELD_PREFACTOR * np.append(d2, d2[0])
